#include "chialvo/basins.hpp"

#include "chialvo/lyapunov.hpp"
#include "chialvo/parallel.hpp"
#include "chialvo/rng.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace chialvo {

namespace {

struct CellResult {
    AttractorKind kind = AttractorKind::diverged;  // diverged, periodic/fixed_point, or aperiodic
    int period = 0;
    std::vector<State> points;
    BoundingBox bbox;
    State last{};
};

CellResult run_cell(const MapParams& p, const State& ic, const BasinConfig& cfg) {
    CellResult r;
    const std::size_t win = 3 * static_cast<std::size_t>(cfg.max_period);
    const std::size_t keep = std::max<std::size_t>(static_cast<std::size_t>(cfg.n_keep), win);
    std::vector<State> ring(win);
    std::vector<State> tail;
    std::vector<State> lin(win);
    State s = ic;
    const long total = std::max<long>(cfg.max_iter, static_cast<long>(keep));
    for (long n = 1; n <= total; ++n) {
        s = step3(p, s);
        if (diverged_state(s, cfg.divergence_threshold)) return r;
        ring[static_cast<std::size_t>(n) % win] = s;
        if (n > total - static_cast<long>(keep)) tail.push_back(s);
        if (n >= cfg.min_transient && n % cfg.check_every == 0 && n >= static_cast<long>(win) &&
            n <= total - static_cast<long>(keep)) {
            for (std::size_t i = 0; i < win; ++i) lin[i] = ring[(static_cast<std::size_t>(n) + 1 + i) % win];
            if (auto per = detect_period(lin, cfg.tol, cfg.max_period)) {
                r.period = *per;
                r.kind = *per == 1 ? AttractorKind::fixed_point : AttractorKind::periodic;
                r.points = canonical_cycle(lin, *per);
                r.bbox = bounding_box(r.points);
                return r;
            }
        }
    }
    r.last = s;
    r.bbox = bounding_box(tail);
    if (auto per = detect_period(tail, cfg.tol, cfg.max_period)) {
        r.period = *per;
        r.kind = *per == 1 ? AttractorKind::fixed_point : AttractorKind::periodic;
        r.points = canonical_cycle(tail, *per);
        return r;
    }
    r.kind = AttractorKind::aperiodic;
    return r;
}

int kind_rank(AttractorKind k) {
    switch (k) {
        case AttractorKind::fixed_point: return 0;
        case AttractorKind::periodic: return 1;
        case AttractorKind::chaotic: return 2;
        case AttractorKind::aperiodic: return 3;
        case AttractorKind::diverged: return 4;
    }
    return 5;
}

}  // namespace

BasinGrid compute_basin(const MapParams& p, const Window2& window, int nx, int ny, double phi0,
                        const BasinConfig& cfg) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("basin grid needs nx, ny >= 2");
    if (cfg.block_rows < 1) throw std::invalid_argument("block_rows must be >= 1");
    BasinGrid g;
    g.window = window;
    g.nx = nx;
    g.ny = ny;
    g.phi0 = phi0;
    g.labels.assign(static_cast<std::size_t>(nx) * ny, kLabelUnresolved);

    std::vector<BoundingBox> nonchaotic;  // aperiodic tails already found to have lmax <= 0
    std::vector<CellResult> block;
    for (int row0 = 0; row0 < ny; row0 += cfg.block_rows) {
        const int rows = std::min(cfg.block_rows, ny - row0);
        const std::size_t base = static_cast<std::size_t>(row0) * nx;
        block.assign(static_cast<std::size_t>(rows) * nx, {});
        parallel_for(block.size(), cfg.workers, [&](std::size_t i) {
            const int ix = static_cast<int>((base + i) % nx), iy = static_cast<int>((base + i) / nx);
            block[i] = run_cell(p, {g.x0(ix), g.y0(iy), phi0}, cfg);
        });
        // sequential arbiter in row-major order
        for (std::size_t i = 0; i < block.size(); ++i) {
            CellResult& c = block[i];
            int& lab = g.labels[base + i];
            if (c.kind == AttractorKind::diverged) {
                lab = kLabelDivergent;
                continue;
            }
            AttractorRecord rec;
            rec.kind = c.kind;
            rec.period = c.period;
            rec.points = std::move(c.points);
            rec.bbox = c.bbox;
            if (rec.is_periodic()) {
                if (auto m = match_attractor(rec, g.catalog, cfg.match_tol)) {
                    lab = static_cast<int>(*m);
                } else {
                    g.catalog.push_back(std::move(rec));
                    lab = static_cast<int>(g.catalog.size()) - 1;
                }
                continue;
            }
            rec.kind = AttractorKind::chaotic;
            if (auto m = match_attractor(rec, g.catalog, cfg.match_tol)) {
                lab = static_cast<int>(*m);
                continue;
            }
            const bool known_nonchaotic = std::any_of(nonchaotic.begin(), nonchaotic.end(),
                [&](const BoundingBox& b) { return box_overlap(b, rec.bbox) >= 0.8; });
            if (known_nonchaotic) {
                lab = kLabelUnresolved;
                continue;
            }
            double lmax = 0.0;
            try {
                lmax = lyapunov_spectrum(p, c.last, 0, cfg.lyap_iter, std::nullopt,
                                         cfg.divergence_threshold).exponents[0];
            } catch (const DivergedOrbit&) {
                lab = kLabelDivergent;
                continue;
            }
            if (lmax > 0.0) {
                rec.max_lyapunov = lmax;
                g.catalog.push_back(std::move(rec));
                lab = static_cast<int>(g.catalog.size()) - 1;
            } else {
                nonchaotic.push_back(rec.bbox);
                lab = kLabelUnresolved;
            }
        }
    }

    // stable output order: (kind, period), discovery order within ties
    std::vector<int> order(g.catalog.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int u, int v) {
        const auto& a = g.catalog[u];
        const auto& b = g.catalog[v];
        if (kind_rank(a.kind) != kind_rank(b.kind)) return kind_rank(a.kind) < kind_rank(b.kind);
        return a.period < b.period;
    });
    std::vector<int> newpos(order.size());
    std::vector<AttractorRecord> sorted;
    sorted.reserve(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        newpos[order[i]] = static_cast<int>(i);
        sorted.push_back(std::move(g.catalog[order[i]]));
    }
    g.catalog = std::move(sorted);
    for (int& l : g.labels)
        if (l >= 0) l = newpos[l];
    return g;
}

BasinStatistics basin_statistics(const BasinGrid& g) {
    BasinStatistics st;
    for (int l : g.labels) ++st.counts[l];
    const double total = static_cast<double>(g.labels.size());
    for (const auto& [l, c] : st.counts) st.fractions[l] = static_cast<double>(c) / total;
    return st;
}

std::vector<std::uint8_t> boundary_mask(const BasinGrid& g) {
    std::vector<std::uint8_t> m(g.labels.size(), 0);
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const int l = g.label(ix, iy);
            const bool b = (ix > 0 && g.label(ix - 1, iy) != l) || (ix + 1 < g.nx && g.label(ix + 1, iy) != l) ||
                           (iy > 0 && g.label(ix, iy - 1) != l) || (iy + 1 < g.ny && g.label(ix, iy + 1) != l);
            m[static_cast<std::size_t>(iy) * g.nx + ix] = b ? 1 : 0;
        }
    return m;
}

std::vector<std::optional<int>> remap_catalog(const BasinGrid& ref, const BasinGrid& other,
                                              double match_tol) {
    std::vector<std::optional<int>> out;
    for (const auto& rec : other.catalog) {
        auto m = match_attractor(rec, ref.catalog, match_tol);
        out.push_back(m ? std::optional<int>(static_cast<int>(*m)) : std::nullopt);
    }
    return out;
}

double label_agreement(const BasinGrid& ref, const BasinGrid& other, double match_tol) {
    if (ref.nx != other.nx || ref.ny != other.ny) throw std::invalid_argument("grid shapes differ");
    const auto map = remap_catalog(ref, other, match_tol);
    const auto mask = boundary_mask(ref);
    long total = 0, same = 0;
    for (std::size_t i = 0; i < ref.labels.size(); ++i) {
        if (mask[i]) continue;
        ++total;
        int o = other.labels[i];
        if (o >= 0) o = map[o] ? *map[o] : -1000;
        if (o == ref.labels[i]) ++same;
    }
    return total == 0 ? 1.0 : static_cast<double>(same) / static_cast<double>(total);
}

LocatorResult locate_multistability(const MapParams& base, const LocatorConfig& cfg) {
    if (cfg.n_k < 2 || cfg.restarts < 1) throw std::invalid_argument("locator needs n_k >= 2, restarts >= 1");
    LocatorResult res;
    res.rows.resize(static_cast<std::size_t>(cfg.n_k));
    parallel_for(res.rows.size(), cfg.workers, [&](std::size_t i) {
        LocatorRow& row = res.rows[i];
        row.k = cfg.k_min + (cfg.k_max - cfg.k_min) * static_cast<double>(i) / (cfg.n_k - 1);
        const MapParams p = with_param(base, "k", row.k);
        std::uint64_t sm = cfg.seed + i;
        Xoshiro256ss rng(splitmix64(sm));
        for (int r = 0; r < cfg.restarts; ++r) {
            State ic;
            ic.x = rng.uniform(cfg.ic_box.x_min, cfg.ic_box.x_max);
            ic.y = rng.uniform(cfg.ic_box.y_min, cfg.ic_box.y_max);
            ic.phi = rng.uniform(cfg.phi_lo, cfg.phi_hi);
            AttractorRecord rec;
            try {
                rec = fingerprint(p, ic, cfg.orbit);
            } catch (const DivergedOrbit&) {
                rec.kind = AttractorKind::diverged;
            }
            if (rec.kind == AttractorKind::diverged) {
                row.any_diverged = true;
                continue;
            }
            if (!match_attractor(rec, row.attractors, cfg.match_tol)) row.attractors.push_back(std::move(rec));
        }
    });
    std::size_t best = 0;
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        const auto& a = res.rows[i].attractors;
        if (a.size() > res.rows[best].attractors.size()) best = i;
        if (res.k_found) continue;
        bool all = static_cast<int>(a.size()) >= cfg.required_count;
        for (int per : cfg.required_periods)
            all = all && std::any_of(a.begin(), a.end(), [&](const AttractorRecord& r) {
                      return r.is_periodic() && r.period == per;
                  });
        if (all) res.k_found = res.rows[i].k;
    }
    res.best_k = res.rows[best].k;
    return res;
}

}  // namespace chialvo
