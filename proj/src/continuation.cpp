#include "chialvo/continuation.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace chialvo {

std::string to_string(EventKind k) {
    switch (k) {
        case EventKind::LP: return "LP";
        case EventKind::PD: return "PD";
        case EventKind::NS: return "NS";
    }
    return "?";
}

namespace {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

struct ExtendedSystem {
    MapParams base;
    std::string name;

    MapParams at(double pv) const { return with_param(base, name, pv); }

    Eigen::Vector3d g(const Vec4& u) const {
        const State s{u(0), u(1), u(2)};
        return to_vec(step3(at(u(3)), s)) - to_vec(s);
    }

    Eigen::Matrix<double, 3, 4> dg(const Vec4& u) const {
        const State s{u(0), u(1), u(2)};
        const MapParams p = at(u(3));
        Eigen::Matrix<double, 3, 4> m;
        m.leftCols<3>() = jacobian3(p, s) - Matrix3::Identity();
        m.col(3) = param_derivative(p, s, name);
        return m;
    }
};

std::optional<Vec4> solve4(const Mat4& a, const Vec4& rhs) {
    Eigen::FullPivLU<Mat4> lu(a);
    if (!lu.isInvertible()) return std::nullopt;
    Vec4 x = lu.solve(rhs);
    if (!x.allFinite()) return std::nullopt;
    return x;
}

std::optional<Vec4> tangent(const ExtendedSystem& sys, const Vec4& u, const Vec4& prev) {
    Mat4 a;
    a.topRows<3>() = sys.dg(u);
    a.row(3) = prev.transpose();
    Vec4 e = Vec4::Zero();
    e(3) = 1.0;
    auto t = solve4(a, e);
    if (!t) return std::nullopt;
    Vec4 v = t->normalized();
    if (v.dot(prev) < 0.0) v = -v;
    return v;
}

// Newton on G(w) = 0 with the hyperplane constraint n.(w - v) = 0
std::optional<Vec4> correct(const ExtendedSystem& sys, Vec4 w, const Vec4& n, const Vec4& v,
                            double tol, int max_newton, int* iters = nullptr) {
    for (int it = 0; it < max_newton; ++it) {
        const Eigen::Vector3d gv = sys.g(w);
        if (!gv.allFinite()) return std::nullopt;
        Vec4 f;
        f.head<3>() = gv;
        f(3) = n.dot(w - v);
        if (gv.lpNorm<Eigen::Infinity>() <= tol && std::abs(f(3)) <= 1e-12) {
            if (iters) *iters = it;
            return w;
        }
        Mat4 a;
        a.topRows<3>() = sys.dg(w);
        a.row(3) = n.transpose();
        auto d = solve4(a, -f);
        if (!d) return std::nullopt;
        w += *d;
        if (d->lpNorm<Eigen::Infinity>() < 1e-15 * (1.0 + w.lpNorm<Eigen::Infinity>())) {
            if (sys.g(w).lpNorm<Eigen::Infinity>() <= tol) {
                if (iters) *iters = it + 1;
                return w;
            }
        }
    }
    const Eigen::Vector3d gv = sys.g(w);
    if (gv.allFinite() && gv.lpNorm<Eigen::Infinity>() <= tol) {
        if (iters) *iters = max_newton;
        return w;
    }
    return std::nullopt;
}

Vec4 pack(const State& s, double p) { return {s.x, s.y, s.phi, p}; }

}  // namespace

BranchPoint evaluate_point(const MapParams& p, const State& s, double param) {
    BranchPoint bp;
    bp.param = param;
    bp.state = s;
    const Matrix3 j = jacobian3(p, s);
    bp.eigenvalues = eigenvalues3(j);
    bp.test_lp = (j - Matrix3::Identity()).determinant();
    bp.test_pd = (j + Matrix3::Identity()).determinant();
    const auto& l = bp.eigenvalues;
    const std::complex<double> one(1.0, 0.0);
    bp.test_ns = ((l[0] * l[1] - one) * (l[0] * l[2] - one) * (l[1] * l[2] - one)).real();
    bp.stable = std::all_of(l.begin(), l.end(), [](auto v) { return std::abs(v) < 1.0; });
    bp.residual = max_abs_diff(step3(p, s), s);
    return bp;
}

Branch continue_branch(const MapParams& base, const std::string& free_param,
                       const FixedPoint& start, const ContinuationOptions& opt) {
    if (!is_param_name(free_param))
        throw std::invalid_argument("unknown continuation parameter '" + free_param + "'");
    if (!(opt.step_min > 0.0 && opt.step_min <= opt.step0 && opt.step0 <= opt.step_max))
        throw std::invalid_argument("need 0 < step_min <= step0 <= step_max");
    if (opt.n_max < 1) throw std::invalid_argument("n_max must be >= 1");

    const ExtendedSystem sys{base, free_param};
    Branch br;
    br.free_param = free_param;
    const double p0 = get_param(base, free_param);

    // polish the start at fixed parameter
    Vec4 n0 = Vec4::Zero();
    n0(3) = 1.0;
    Vec4 u0 = pack(start.state(), p0);
    auto u = correct(sys, u0, n0, u0, opt.tol, opt.max_newton);
    if (!u) {
        br.diagnostics.push_back("start point does not converge to a fixed point");
        return br;
    }
    br.points.push_back(evaluate_point(sys.at(p0), {(*u)(0), (*u)(1), (*u)(2)}, p0));

    Vec4 prev = Vec4::Zero();
    prev(3) = opt.direction >= 0 ? 1.0 : -1.0;
    auto t = tangent(sys, *u, prev);
    if (!t) {
        br.diagnostics.push_back("singular extended Jacobian at the start point");
        return br;
    }

    double h = opt.step0;
    while (static_cast<int>(br.points.size()) < opt.n_max) {
        const Vec4 v = *u + h * *t;
        int iters = 0;
        auto w = correct(sys, v, *t, v, opt.tol, opt.max_newton, &iters);
        std::optional<Vec4> tn;
        bool ok = false;
        if (w && (*w - *u).norm() <= 2.0 * h) {
            tn = tangent(sys, *w, *t);
            ok = tn && tn->dot(*t) > 0.9;
        }
        if (!ok) {
            h *= 0.5;
            if (h < opt.step_min) {
                std::ostringstream os;
                os << "corrector failed below step_min at " << free_param << "=" << (*u)(3);
                br.diagnostics.push_back(os.str());
                break;
            }
            continue;
        }
        const double pv = (*w)(3);
        if (pv < opt.p_min || pv > opt.p_max) {
            br.diagnostics.push_back("parameter bound reached");
            break;
        }
        u = w;
        t = tn;
        br.points.push_back(evaluate_point(sys.at(pv), {(*u)(0), (*u)(1), (*u)(2)}, pv));
        if (iters <= 3) h = std::min(opt.step_max, h * 1.5);
    }
    if (static_cast<int>(br.points.size()) >= opt.n_max) br.diagnostics.push_back("n_max reached");
    return br;
}

namespace {

double test_of(const BranchPoint& b, EventKind k) {
    switch (k) {
        case EventKind::LP: return b.test_lp;
        case EventKind::PD: return b.test_pd;
        case EventKind::NS: return b.test_ns;
    }
    return 0.0;
}

bool complex_pair_near_circle(const BranchPoint& b, double band) {
    for (const auto& l : b.eigenvalues)
        if (l.imag() != 0.0 && std::abs(std::abs(l) - 1.0) <= band) return true;
    return false;
}

}  // namespace

EventReport detect_codim1(const MapParams& base, const Branch& branch, double ns_band,
                          double param_tol, double corrector_tol) {
    EventReport rep;
    if (branch.points.size() < 2) return rep;
    const ExtendedSystem sys{base, branch.free_param};

    for (std::size_t i = 0; i + 1 < branch.points.size(); ++i) {
        const BranchPoint& a = branch.points[i];
        const BranchPoint& b = branch.points[i + 1];
        for (EventKind kind : {EventKind::LP, EventKind::PD, EventKind::NS}) {
            const double ta = test_of(a, kind), tb = test_of(b, kind);
            const bool change = (ta < 0.0 && tb > 0.0) || (ta > 0.0 && tb < 0.0) ||
                                (tb == 0.0 && ta != 0.0);
            if (!change) continue;
            if (kind == EventKind::NS &&
                !(complex_pair_near_circle(a, ns_band) || complex_pair_near_circle(b, ns_band)))
                continue;

            // bisection on the chord parameter, each trial projected back onto the branch
            const Vec4 ua = pack(a.state, a.param), ub = pack(b.state, b.param);
            const Vec4 n = (ub - ua).normalized();
            Vec4 lo = ua, hi = ub;
            double tlo = ta, slo = 0.0, shi = 1.0;
            BranchPoint best = std::abs(ta) < std::abs(tb) ? a : b;
            bool failed = false;
            for (int it = 0; it < 200; ++it) {
                if (std::abs(hi(3) - lo(3)) < param_tol && (hi - lo).lpNorm<Eigen::Infinity>() < 1e-11)
                    break;
                const double sm = 0.5 * (slo + shi);
                const Vec4 v = ua + sm * (ub - ua);
                auto w = correct(sys, v, n, v, corrector_tol, 25);
                if (!w) {
                    failed = true;
                    break;
                }
                const BranchPoint bp = evaluate_point(sys.at((*w)(3)), {(*w)(0), (*w)(1), (*w)(2)}, (*w)(3));
                const double tm = test_of(bp, kind);
                if (std::abs(tm) < std::abs(test_of(best, kind))) best = bp;
                if (tm == 0.0) break;
                if ((tm < 0.0) == (tlo < 0.0)) {
                    lo = *w; tlo = tm; slo = sm;
                } else {
                    hi = *w; shi = sm;
                }
            }
            if (failed) {
                std::ostringstream os;
                os << to_string(kind) << " refinement lost the branch near "
                   << branch.free_param << "=" << a.param;
                rep.warnings.push_back(os.str());
            }
            BifurcationEvent ev;
            ev.kind = kind;
            ev.param = best.param;
            ev.state = best.state;
            ev.eigenvalues = best.eigenvalues;
            ev.test_value = test_of(best, kind);
            ev.bracket = i;
            rep.events.push_back(ev);
        }
    }
    for (std::size_t i = 0; i < rep.events.size(); ++i)
        for (std::size_t j = i + 1; j < rep.events.size(); ++j)
            if (std::abs(rep.events[i].param - rep.events[j].param) <= param_tol) {
                std::ostringstream os;
                os << to_string(rep.events[i].kind) << " and " << to_string(rep.events[j].kind)
                   << " coincide within " << param_tol << " at " << branch.free_param << "="
                   << rep.events[i].param;
                rep.warnings.push_back(os.str());
            }
    return rep;
}

}  // namespace chialvo
