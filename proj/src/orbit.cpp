#include "chialvo/orbit.hpp"

#include "chialvo/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace chialvo {

std::string to_string(AttractorKind k) {
    switch (k) {
        case AttractorKind::fixed_point: return "fixed-point";
        case AttractorKind::periodic: return "periodic";
        case AttractorKind::chaotic: return "chaotic";
        case AttractorKind::aperiodic: return "aperiodic";
        case AttractorKind::diverged: return "diverged";
    }
    return "?";
}

bool diverged_state(const State& s, double threshold) {
    return !finite(s) || std::abs(s.x) > threshold;
}

Trajectory iterate(const MapParams& p, const State& ic, long n_transient, long n_keep,
                   double divergence_threshold) {
    if (n_transient < 0) throw std::invalid_argument("n_transient must be >= 0");
    if (n_keep < 1) throw std::invalid_argument("n_keep must be >= 1");
    Trajectory t;
    t.states.reserve(static_cast<std::size_t>(n_keep));
    State s = ic;
    const long total = n_transient + n_keep;
    for (long n = 1; n <= total; ++n) {
        s = step3(p, s);
        if (diverged_state(s, divergence_threshold)) {
            t.diverged = true;
            t.divergence_step = n;
            return t;
        }
        if (n > n_transient) t.states.push_back(s);
    }
    return t;
}

std::optional<int> detect_period(const std::vector<State>& tail, double tol, int max_period) {
    if (max_period < 1) throw std::invalid_argument("max_period must be >= 1");
    if (tail.size() < 3 * static_cast<std::size_t>(max_period))
        throw std::invalid_argument("tail shorter than 3*max_period");
    for (int p = 1; p <= max_period; ++p) {
        bool ok = true;
        for (std::size_t n = 0; n + p < tail.size() && ok; ++n)
            ok = max_abs_diff(tail[n + p], tail[n]) < tol;
        if (ok) return p;
    }
    return std::nullopt;
}

std::optional<int> detect_period(const Trajectory& traj, double tol, int max_period) {
    if (traj.diverged) throw std::invalid_argument("cannot detect the period of a diverged orbit");
    return detect_period(traj.states, tol, max_period);
}

BoundingBox bounding_box(const std::vector<State>& states) {
    BoundingBox b;
    if (states.empty()) return b;
    b.lo = b.hi = states.front();
    for (const auto& s : states) {
        b.lo.x = std::min(b.lo.x, s.x); b.hi.x = std::max(b.hi.x, s.x);
        b.lo.y = std::min(b.lo.y, s.y); b.hi.y = std::max(b.hi.y, s.y);
        b.lo.phi = std::min(b.lo.phi, s.phi); b.hi.phi = std::max(b.hi.phi, s.phi);
    }
    return b;
}

namespace {
bool lex_less(const State& u, const State& v) {
    return std::tie(u.x, u.y, u.phi) < std::tie(v.x, v.y, v.phi);
}
}  // namespace

std::vector<State> canonical_cycle(const std::vector<State>& tail, int period) {
    const std::size_t p = static_cast<std::size_t>(period);
    const std::size_t start = tail.size() - p;
    std::vector<State> cyc(tail.begin() + static_cast<long>(start), tail.end());
    auto it = std::min_element(cyc.begin(), cyc.end(), lex_less);
    std::rotate(cyc.begin(), it, cyc.end());
    return cyc;
}

AttractorRecord fingerprint(const MapParams& p, const State& ic, const OrbitConfig& cfg) {
    AttractorRecord rec;
    const Trajectory t = iterate(p, ic, cfg.n_transient, cfg.n_keep, cfg.divergence_threshold);
    if (t.diverged) {
        rec.kind = AttractorKind::diverged;
        return rec;
    }
    rec.bbox = bounding_box(t.states);
    if (auto per = detect_period(t, cfg.tol, cfg.max_period)) {
        rec.period = *per;
        rec.kind = *per == 1 ? AttractorKind::fixed_point : AttractorKind::periodic;
        rec.points = canonical_cycle(t.states, *per);
        return rec;
    }
    const auto ls = lyapunov_spectrum(p, t.states.back(), 0, cfg.lyap_iter);
    rec.max_lyapunov = ls.exponents[0];
    rec.kind = rec.max_lyapunov > 0.0 ? AttractorKind::chaotic : AttractorKind::aperiodic;
    return rec;
}

namespace {
double iou(double lo1, double hi1, double lo2, double hi2) {
    const double uni = std::max(hi1, hi2) - std::min(lo1, lo2);
    if (uni <= 0.0) return lo1 == lo2 ? 1.0 : 0.0;
    const double inter = std::max(0.0, std::min(hi1, hi2) - std::max(lo1, lo2));
    return inter / uni;
}
}  // namespace

double box_overlap(const BoundingBox& u, const BoundingBox& v) {
    return std::min({iou(u.lo.x, u.hi.x, v.lo.x, v.hi.x), iou(u.lo.y, u.hi.y, v.lo.y, v.hi.y),
                     iou(u.lo.phi, u.hi.phi, v.lo.phi, v.hi.phi)});
}

std::optional<std::size_t> match_attractor(const AttractorRecord& rec,
                                           const std::vector<AttractorRecord>& catalog,
                                           double match_tol) {
    if (rec.kind == AttractorKind::diverged)
        throw std::invalid_argument("diverged records are not matched");
    for (std::size_t i = 0; i < catalog.size(); ++i) {
        const auto& c = catalog[i];
        if (rec.is_periodic()) {
            if (!c.is_periodic() || c.period != rec.period || c.points.size() != rec.points.size())
                continue;
            const std::size_t p = rec.points.size();
            for (std::size_t r = 0; r < p; ++r) {
                bool ok = true;
                for (std::size_t j = 0; j < p && ok; ++j)
                    ok = max_abs_diff(rec.points[j], c.points[(j + r) % p]) <= match_tol;
                if (ok) return i;
            }
        } else if (c.kind == rec.kind && box_overlap(rec.bbox, c.bbox) >= 0.8) {
            return i;
        }
    }
    return std::nullopt;
}

}  // namespace chialvo
