#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chialvo/basins.hpp"

#include <cmath>
#include <numeric>

using namespace chialvo;

namespace {

BasinConfig small_cfg(int workers) {
    BasinConfig c;
    c.max_iter = 20000;
    c.lyap_iter = 5000;
    c.workers = workers;
    c.block_rows = 3;
    return c;
}

int kind_rank(AttractorKind k) {
    switch (k) {
        case AttractorKind::fixed_point: return 0;
        case AttractorKind::periodic: return 1;
        case AttractorKind::aperiodic: return 2;
        case AttractorKind::chaotic: return 3;
        default: return 4;
    }
}

}  // namespace

TEST_CASE("grid geometry uses cell centres") {
    BasinGrid g;
    g.window = Window2{0.0, 1.0, -1.0, 1.0};
    g.nx = 4;
    g.ny = 2;
    CHECK(g.x0(0) == doctest::Approx(0.125));
    CHECK(g.x0(3) == doctest::Approx(0.875));
    CHECK(g.y0(0) == doctest::Approx(-0.5));
    CHECK(g.y0(1) == doctest::Approx(0.5));
}

TEST_CASE("basin labels are deterministic across workers") {
    const MapParams p = presets::base_family(5.8);
    const Window2 w{-1.0, 3.0, -1.0, 3.0};
    const auto a = compute_basin(p, w, 24, 20, 0.0, small_cfg(1));
    const auto b = compute_basin(p, w, 24, 20, 0.0, small_cfg(4));
    REQUIRE(a.labels.size() == 24u * 20u);
    CHECK(a.labels == b.labels);
    REQUIRE(a.catalog.size() == b.catalog.size());
    for (std::size_t i = 0; i < a.catalog.size(); ++i) {
        CHECK(a.catalog[i].kind == b.catalog[i].kind);
        CHECK(a.catalog[i].period == b.catalog[i].period);
    }
    for (int l : a.labels) {
        CHECK(l >= kLabelUnresolved);
        CHECK(l < static_cast<int>(a.catalog.size()));
    }
}

TEST_CASE("catalog order and statistics") {
    const MapParams p = presets::base_family(5.8);
    const auto g = compute_basin(p, Window2{-1.0, 3.0, -1.0, 3.0}, 16, 16, 0.0, small_cfg(2));
    for (std::size_t i = 1; i < g.catalog.size(); ++i) {
        const auto& u = g.catalog[i - 1];
        const auto& v = g.catalog[i];
        CHECK((kind_rank(u.kind) < kind_rank(v.kind) ||
               (kind_rank(u.kind) == kind_rank(v.kind) && u.period <= v.period)));
    }
    const auto st = basin_statistics(g);
    long total = 0;
    double frac = 0.0;
    for (const auto& [l, n] : st.counts) total += n;
    for (const auto& [l, f] : st.fractions) frac += f;
    CHECK(total == 256);
    CHECK(frac == doctest::Approx(1.0));
    // the stable fixed point near x = 1.31 owns part of the window
    bool fp = false;
    for (const auto& r : g.catalog) fp = fp || (r.kind == AttractorKind::fixed_point && std::abs(r.points[0].x - 1.30956) < 1e-3);
    CHECK(fp);
}

TEST_CASE("single attractor basin") {
    const MapParams p = presets::base_family(7.6);
    const auto g = compute_basin(p, Window2{1.7, 1.8, 0.33, 0.42}, 6, 5, 0.146, small_cfg(1));
    REQUIRE(g.catalog.size() == 1);
    CHECK(g.catalog[0].kind == AttractorKind::fixed_point);
    for (int l : g.labels) CHECK(l == 0);
    const auto m = boundary_mask(g);
    CHECK(std::accumulate(m.begin(), m.end(), 0) == 0);
}

TEST_CASE("boundary mask, remap and agreement") {
    BasinGrid g;
    g.nx = 3;
    g.ny = 2;
    g.labels = {0, 0, 1, 0, 0, 1};
    const auto m = boundary_mask(g);
    const std::vector<std::uint8_t> expect{0, 1, 1, 0, 1, 1};
    CHECK(m == expect);

    const MapParams p = presets::base_family(5.8);
    const auto a = compute_basin(p, Window2{-1.0, 3.0, -1.0, 3.0}, 12, 12, 0.0, small_cfg(1));
    const auto r = remap_catalog(a, a, 1e-4);
    for (std::size_t i = 0; i < r.size(); ++i) CHECK(r[i] == std::optional<int>(static_cast<int>(i)));
    CHECK(label_agreement(a, a, 1e-4) == 1.0);
}

TEST_CASE("locator on a short k range") {
    LocatorConfig c;
    c.k_min = -1.7;
    c.k_max = -1.6;
    c.n_k = 3;
    c.restarts = 2;
    c.orbit.lyap_iter = 2000;
    c.required_periods = {6};
    c.required_count = 1;
    c.workers = 2;
    const auto r = locate_multistability(presets::base_family(), c);
    REQUIRE(r.rows.size() == 3);
    CHECK(r.rows[0].k == doctest::Approx(-1.7));
    REQUIRE(r.k_found.has_value());
    CHECK(*r.k_found > -1.7);  // period 12 at -1.7, period 6 above
    c.workers = 1;
    const auto s = locate_multistability(presets::base_family(), c);
    CHECK(s.best_k == r.best_k);
}
