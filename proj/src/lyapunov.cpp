#include "chialvo/lyapunov.hpp"

#include "chialvo/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace chialvo {

LyapunovSpectrum lyapunov_spectrum(const MapParams& p, const State& ic, long n_transient,
                                   long n_iter, const std::optional<Matrix3>& frame,
                                   double divergence_threshold) {
    if (n_iter < 1) throw std::invalid_argument("n_iter must be >= 1");
    State s = ic;
    for (long n = 0; n < n_transient; ++n) {
        s = step3(p, s);
        if (diverged_state(s, divergence_threshold))
            throw DivergedOrbit("orbit diverged during the Lyapunov transient");
    }

    Matrix3 q = frame ? *frame : Matrix3::Identity();
    {
        // reject frames that are numerically rank deficient
        const Eigen::JacobiSVD<Matrix3> svd(q);
        const auto sv = svd.singularValues();
        if (!(sv(2) > 1e-12 * sv(0))) throw DegenerateFrame("initial frame is rank deficient");
        q = q.householderQr().householderQ();
    }
    Eigen::HouseholderQR<Matrix3> init(q);
    q = init.householderQ();

    std::array<double, 3> sum{0.0, 0.0, 0.0};
    double sum_det = 0.0;
    LyapunovSpectrum out;
    out.ic = ic;
    for (long n = 0; n < n_iter; ++n) {
        const Matrix3 j = jacobian3(p, s);
        sum_det += std::log(std::abs(j.determinant()));
        Matrix3 v = j * q;
        // modified Gram-Schmidt
        for (int c = 0; c < 3; ++c) {
            for (int d = 0; d < c; ++d) v.col(c) -= v.col(d).dot(v.col(c)) * v.col(d);
            const double r = v.col(c).norm();
            if (!(r > 0.0) || !std::isfinite(r)) throw DegenerateFrame("QR frame collapsed");
            v.col(c) /= r;
            sum[c] += std::log(r);
        }
        q = v;
        s = step3(p, s);
        if (diverged_state(s, divergence_threshold))
            throw DivergedOrbit("orbit diverged during the Lyapunov run");
    }
    for (int c = 0; c < 3; ++c) out.exponents[c] = sum[c] / static_cast<double>(n_iter);
    std::sort(out.exponents.begin(), out.exponents.end(), std::greater<>());
    out.mean_log_det = sum_det / static_cast<double>(n_iter);
    out.n_iter = n_iter;
    out.final_state = s;
    return out;
}

}  // namespace chialvo
