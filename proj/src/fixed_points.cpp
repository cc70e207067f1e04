#include "chialvo/fixed_points.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chialvo {

std::string to_string(FluxDenominator d) {
    return d == FluxDenominator::consistent ? "consistent" : "printed";
}

FluxDenominator parse_flux_denominator(const std::string& s) {
    if (s == "consistent") return FluxDenominator::consistent;
    if (s == "printed") return FluxDenominator::printed;
    throw std::invalid_argument("fp_denominator must be 'consistent' or 'printed'");
}

std::string to_string(Stability s) {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::saddle: return "saddle";
        case Stability::repelling: return "repelling";
    }
    return "?";
}

namespace {

double cubic_denominator(const MapParams& p, FluxDenominator d) {
    return d == FluxDenominator::consistent ? (1.0 + p.k2) * (1.0 + p.k2) : 1.0 + p.k2 * p.k2;
}

void require_a(const MapParams& p) {
    if (p.a == 1.0) throw std::invalid_argument("fixed-point elimination needs a != 1");
}

}  // namespace

double fp_residual(const MapParams& p, double x, FluxDenominator d) {
    require_a(p);
    const double ex = ((p.b - p.a + 1.0) * x - p.c) / (p.a - 1.0);
    const double cub = 3.0 * p.k * p.beta * p.k1 * p.k1 / cubic_denominator(p, d);
    return x * x * std::exp(ex) + p.k0 + cub * x * x * x + x * p.k * p.alpha - x;
}

double fp_residual_derivative(const MapParams& p, double x, FluxDenominator d) {
    require_a(p);
    const double g = (p.b - p.a + 1.0) / (p.a - 1.0);
    const double e = std::exp(g * x - p.c / (p.a - 1.0));
    const double cub = 3.0 * p.k * p.beta * p.k1 * p.k1 / cubic_denominator(p, d);
    return e * (2.0 * x + g * x * x) + 3.0 * cub * x * x + p.k * p.alpha - 1.0;
}

FixedPoint lift_fixed_point(const MapParams& p, double x, FluxDenominator d) {
    require_a(p);
    FixedPoint fp;
    fp.x = x;
    fp.y = (p.b * x - p.c) / (p.a - 1.0);
    fp.phi = p.k1 * x / (1.0 + p.k2);
    fp.residual = fp_residual(p, x, d);
    return fp;
}

namespace {

double refine_root(const MapParams& p, double lo, double hi, double flo, double tol,
                   FluxDenominator d) {
    // bisection to the bracket floor, then a few guarded Newton steps
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fm = fp_residual(p, mid, d);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-15 * std::max(1.0, std::abs(mid)) && std::abs(fm) <= tol) break;
    }
    double x = mid;
    for (int it = 0; it < 4; ++it) {
        const double f = fp_residual(p, x, d);
        const double df = fp_residual_derivative(p, x, d);
        if (df == 0.0 || !std::isfinite(df)) break;
        const double xn = x - f / df;
        if (!(xn >= lo && xn <= hi)) break;
        if (std::abs(fp_residual(p, xn, d)) > std::abs(f)) break;
        x = xn;
    }
    return x;
}

double golden_min_abs(const MapParams& p, double lo, double hi, FluxDenominator d) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - g * (hi - lo), e = lo + g * (hi - lo);
    double fc = std::abs(fp_residual(p, c, d)), fe = std::abs(fp_residual(p, e, d));
    for (int it = 0; it < 80; ++it) {
        if (fc < fe) {
            hi = e; e = c; fe = fc;
            c = hi - g * (hi - lo);
            fc = std::abs(fp_residual(p, c, d));
        } else {
            lo = c; c = e; fc = fe;
            e = lo + g * (hi - lo);
            fe = std::abs(fp_residual(p, e, d));
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

FixedPointResult find_fixed_points(const MapParams& p, const RootSearch& rs) {
    if (!(rs.x_min < rs.x_max)) throw std::invalid_argument("x_min must be below x_max");
    if (rs.grid_n < 2) throw std::invalid_argument("grid_n must be at least 2");
    if (!(rs.tol > 0.0)) throw std::invalid_argument("tol must be positive");
    require_a(p);

    const int n = rs.grid_n;
    const double h = (rs.x_max - rs.x_min) / (n - 1);
    std::vector<double> xs(n), fs(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = i == n - 1 ? rs.x_max : rs.x_min + i * h;
        fs[i] = fp_residual(p, xs[i], rs.denominator);
    }

    FixedPointResult out;
    std::vector<double> roots;
    for (int i = 0; i + 1 < n; ++i) {
        if (fs[i] == 0.0) {
            roots.push_back(xs[i]);
        } else if (std::isfinite(fs[i]) && std::isfinite(fs[i + 1]) && fs[i + 1] != 0.0 &&
                   (fs[i] < 0.0) != (fs[i + 1] < 0.0)) {
            roots.push_back(refine_root(p, xs[i], xs[i + 1], fs[i], rs.tol, rs.denominator));
        }
    }
    if (fs[n - 1] == 0.0) roots.push_back(xs[n - 1]);

    std::sort(roots.begin(), roots.end());
    for (double r : roots) {
        if (!out.roots.empty() && std::abs(r - out.roots.back().x) <= 10.0 * rs.tol) continue;
        out.roots.push_back(lift_fixed_point(p, r, rs.denominator));
    }

    // local minima of |f| that do not change sign
    const double near = std::sqrt(rs.tol);
    for (int i = 1; i + 1 < n; ++i) {
        const double a0 = std::abs(fs[i - 1]), a1 = std::abs(fs[i]), a2 = std::abs(fs[i + 1]);
        if (!(a1 <= a0 && a1 <= a2)) continue;
        if ((fs[i - 1] < 0.0) != (fs[i + 1] < 0.0) || (fs[i] < 0.0) != (fs[i - 1] < 0.0)) continue;
        const double xm = golden_min_abs(p, xs[i - 1], xs[i + 1], rs.denominator);
        const double fm = fp_residual(p, xm, rs.denominator);
        if (std::abs(fm) < near && (fm < 0.0) == (fs[i] < 0.0)) out.possible_tangencies.push_back(xm);
    }
    return out;
}

std::array<std::complex<double>, 3> eigenvalues3(const Matrix3& m) {
    Eigen::EigenSolver<Matrix3> es(m, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalue solver failed");
    std::array<std::complex<double>, 3> ev;
    for (int i = 0; i < 3; ++i) ev[i] = es.eigenvalues()(i);
    std::sort(ev.begin(), ev.end(), [](auto u, auto v) {
        if (std::abs(u) != std::abs(v)) return std::abs(u) > std::abs(v);
        if (u.real() != v.real()) return u.real() > v.real();
        return u.imag() > v.imag();
    });
    return ev;
}

StabilityReport classify_matrix(const Matrix3& m) {
    StabilityReport r;
    r.eigenvalues = eigenvalues3(m);
    int inside = 0, outside = 0;
    for (const auto& l : r.eigenvalues) {
        if (std::abs(l) < 1.0) ++inside;
        if (std::abs(l) > 1.0) ++outside;
        if (l.imag() != 0.0) r.has_complex_pair = true;
    }
    if (inside == 3) r.classification = Stability::stable;
    else if (outside == 3) r.classification = Stability::repelling;
    else r.classification = Stability::saddle;
    return r;
}

StabilityReport classify(const MapParams& p, const FixedPoint& fp) {
    return classify_matrix(jacobian3(p, fp.state()));
}

}  // namespace chialvo
