#include "chialvo/noninvertibility.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace chialvo {

double lc_residual2(double a, double b, const State2& s) {
    return std::exp(s.y - s.x) * (2.0 * a * s.x - a * s.x * s.x + b * s.x * s.x);
}

double lc_residual3(const MapParams& p, const State& s) {
    const double e = std::exp(s.y - s.x);
    const double m = memductance(p.alpha, p.beta, s.phi);
    return -e * (2.0 * s.x - s.x * s.x) * p.k2 * p.a - p.k2 * p.a * p.k * m -
           p.b * p.k2 * s.x * s.x * e - 6.0 * p.k * s.x * p.beta * s.phi * p.a * p.k1;
}

namespace {

// bisection on t in [0,1] for f(t) with f(0), f(1) of opposite sign
double bisect(const std::function<double(double)>& f, double f0) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (lo + hi);
        if (m == lo || m == hi) break;
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm < 0.0) == (f0 < 0.0)) lo = m;
        else hi = m;
    }
    return 0.5 * (lo + hi);
}

bool opposite(double u, double v) { return (u < 0.0 && v > 0.0) || (u > 0.0 && v < 0.0); }

double lerp(double a, double b, double t) { return a + (b - a) * t; }

}  // namespace

CriticalSet extract_lc2(double a, double b, const Window2& w, int nx, int ny) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("grid needs at least 2x2 nodes");
    CriticalSet cs;
    auto xs = [&](int i) { return lerp(w.x_min, w.x_max, static_cast<double>(i) / (nx - 1)); };
    auto ys = [&](int j) { return lerp(w.y_min, w.y_max, static_cast<double>(j) / (ny - 1)); };
    std::vector<double> f(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) f[j * nx + i] = lc_residual2(a, b, {xs(i), ys(j)});

    auto add = [&](double x, double y) {
        cs.points.push_back({x, y, 0.0});
        cs.residuals.push_back(lc_residual2(a, b, {x, y}));
    };
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double f0 = f[j * nx + i];
            if (f0 == 0.0) {
                add(xs(i), ys(j));
                continue;
            }
            if (i + 1 < nx && opposite(f0, f[j * nx + i + 1])) {
                const double x0 = xs(i), x1 = xs(i + 1), y = ys(j);
                const double t = bisect([&](double s) { return lc_residual2(a, b, {lerp(x0, x1, s), y}); }, f0);
                add(lerp(x0, x1, t), y);
            }
            if (j + 1 < ny && opposite(f0, f[(j + 1) * nx + i])) {
                const double y0 = ys(j), y1 = ys(j + 1), x = xs(i);
                const double t = bisect([&](double s) { return lc_residual2(a, b, {x, lerp(y0, y1, s)}); }, f0);
                add(x, lerp(y0, y1, t));
            }
        }
    }
    return cs;
}

std::vector<State2> planar(const CriticalSet& cs) {
    std::vector<State2> out;
    out.reserve(cs.points.size());
    for (const auto& s : cs.points) out.push_back({s.x, s.y});
    return out;
}

std::vector<State2> image2(const Map2Params& p, const std::vector<State2>& pts, int n) {
    std::vector<State2> out = pts;
    for (int it = 0; it < n; ++it)
        for (auto& s : out) s = step2(p, s);
    return out;
}

CriticalSet extract_lc3(const MapParams& p, const Window3& w, int nx, int ny, int nphi) {
    if (nx < 2 || ny < 2 || nphi < 2) throw std::invalid_argument("grid needs at least 2 nodes per axis");
    CriticalSet cs;
    cs.surface = true;
    for (int k = 0; k < nphi; ++k) {
        const double phi = lerp(w.phi_min, w.phi_max, static_cast<double>(k) / (nphi - 1));
        for (int j = 0; j < ny; ++j) {
            const double y = lerp(w.y_min, w.y_max, static_cast<double>(j) / (ny - 1));
            double xprev = w.x_min;
            double fprev = lc_residual3(p, {xprev, y, phi});
            for (int i = 1; i < nx; ++i) {
                const double x = lerp(w.x_min, w.x_max, static_cast<double>(i) / (nx - 1));
                const double fx = lc_residual3(p, {x, y, phi});
                if (fprev == 0.0) {
                    cs.points.push_back({xprev, y, phi});
                    cs.residuals.push_back(0.0);
                } else if (opposite(fprev, fx)) {
                    const double x0 = xprev;
                    const double t = bisect([&](double s) { return lc_residual3(p, {lerp(x0, x, s), y, phi}); }, fprev);
                    const State s{lerp(x0, x, t), y, phi};
                    cs.points.push_back(s);
                    cs.residuals.push_back(lc_residual3(p, s));
                }
                xprev = x;
                fprev = fx;
            }
        }
    }
    return cs;
}

namespace {

std::vector<double> roots_1d(const std::function<double(double)>& g, const PreimageSearch& ps) {
    if (!(ps.x_min < ps.x_max) || ps.grid_n < 2) throw std::invalid_argument("bad preimage search range");
    std::vector<double> roots;
    const int n = ps.grid_n;
    auto xs = [&](int i) { return lerp(ps.x_min, ps.x_max, static_cast<double>(i) / (n - 1)); };
    double x0 = xs(0), f0 = g(x0);
    for (int i = 1; i < n; ++i) {
        const double x1 = xs(i), f1 = g(x1);
        if (f0 == 0.0) {
            roots.push_back(x0);
        } else if (std::isfinite(f0) && std::isfinite(f1) && opposite(f0, f1)) {
            const double a = x0;
            const double t = bisect([&](double s) { return g(lerp(a, x1, s)); }, f0);
            roots.push_back(lerp(a, x1, t));
        }
        x0 = x1;
        f0 = f1;
    }
    if (f0 == 0.0) roots.push_back(x0);

    // tails outside the window on a geometric grid; the residuals are
    // monotone there for the maps in use, so one bracket per tail suffices
    const double span = ps.x_max - ps.x_min;
    for (const int side : {-1, 1}) {
        double xa = side > 0 ? ps.x_max : ps.x_min, fa = g(xa);
        for (int j = 0; j < 64; ++j) {
            const double xb = xa + side * span * std::ldexp(1.0, j);
            const double fb = g(xb);
            if (!std::isfinite(fa) || !std::isfinite(fb)) break;
            if (fb == 0.0) {
                roots.push_back(xb);
                break;
            }
            if (opposite(fa, fb)) {
                const double a = xa;
                const double t = bisect([&](double s) { return g(lerp(a, xb, s)); }, fa);
                roots.push_back(lerp(a, xb, t));
                break;
            }
            xa = xb;
            fa = fb;
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace

Preimages2 preimages2(const Map2Params& p, const State2& t, const PreimageSearch& ps) {
    if (p.a == 0.0) throw std::invalid_argument("2D preimages need a != 0");
    auto yof = [&](double x) { return (t.y - p.c + p.b * x) / p.a; };
    auto g = [&](double x) { return x * x * std::exp(yof(x) - x) + p.k0 - t.x; };
    Preimages2 out;
    for (double x : roots_1d(g, ps)) out.points.push_back({x, yof(x)});
    out.count = static_cast<int>(out.points.size());
    return out;
}

Preimages3 preimages3(const MapParams& p, const State& t, const PreimageSearch& ps) {
    if (p.a == 0.0) throw std::invalid_argument("3D preimages need a != 0");
    if (p.k2 == 0.0) throw std::invalid_argument("3D preimages need k2 != 0");
    auto yof = [&](double x) { return (t.y - p.c + p.b * x) / p.a; };
    auto pof = [&](double x) { return (p.k1 * x - t.phi) / p.k2; };
    auto g = [&](double x) {
        return x * x * std::exp(yof(x) - x) + p.k0 + p.k * x * memductance(p.alpha, p.beta, pof(x)) - t.x;
    };
    Preimages3 out;
    for (double x : roots_1d(g, ps)) out.points.push_back({x, yof(x), pof(x)});
    out.count = static_cast<int>(out.points.size());
    return out;
}

}  // namespace chialvo
