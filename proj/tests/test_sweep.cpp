#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chialvo/orbit.hpp"
#include "chialvo/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

using namespace chialvo;

namespace {

bool same_row(const BifurcationRow& a, const BifurcationRow& b) {
    return a.param == b.param && a.diverged == b.diverged && a.x == b.x &&
           a.branch_count == b.branch_count && a.max_lyapunov == b.max_lyapunov;
}

}  // namespace

TEST_CASE("count_branches") {
    CHECK(count_branches({0.3, 0.3, 0.3}) == 1);
    CHECK(count_branches({0.0, 0.5, 1.0}, 0.1) == 3);
    CHECK(count_branches({0.0, 0.05, 0.1, 0.15}, 0.1) == 1);  // single linkage chains
    CHECK(count_branches({1.0, 0.0, 1.00001, 0.00002}) == 2);
}

TEST_CASE("branch count of a period-6 orbit") {
    const auto t = iterate(presets::base_family(-1.6), {0.1, 0.1, 0.0}, 10000, 100);
    std::vector<double> xs;
    for (const auto& s : t.states) xs.push_back(s.x);
    CHECK(count_branches(xs, 1e-4) == 6);
    CHECK(detect_period(t, 1e-6, 30) == 6);
}

TEST_CASE("sweep grid validation") {
    SweepSpec s;
    s.start = 0.0;
    s.stop = 1.0;
    s.n_points = 5;
    CHECK_NOTHROW(s.validate());
    s.param = "sigma";
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.param = "mu";
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.param = "k";
    s.n_points = 1;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.n_points = 3;
    s.stop = s.start;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("grid and scan order") {
    SweepSpec s;
    s.start = -1.0;
    s.stop = 1.0;
    s.n_points = 5;
    CHECK(s.value(0) == -1.0);
    CHECK(s.value(4) == 1.0);
    CHECK(s.value(2) == doctest::Approx(0.0));
    s.direction = Direction::backward;
    const auto o = s.order();
    CHECK(o.front() == 4);
    CHECK(o.back() == 0);
}

TEST_CASE("fixed-point region has constant tails") {
    SweepSpec s;
    s.start = 7.0;
    s.stop = 8.0;
    s.n_points = 5;
    const auto d = bifurcation_sweep(presets::base_family(), s);
    REQUIRE(d.rows.size() == 5);
    for (const auto& r : d.rows) {
        REQUIRE(r.x.size() == 100);
        const auto [lo, hi] = std::minmax_element(r.x.begin(), r.x.end());
        CHECK(*hi - *lo < 1e-6);
        CHECK(r.branch_count == 1);
    }
}

TEST_CASE("fixed-ic output does not depend on direction or workers") {
    SweepSpec s;
    s.start = -2.0;
    s.stop = -0.2;
    s.n_points = 19;
    s.n_transient = 3000;
    s.ic_policy = IcPolicy::fixed_ic;
    SweepOptions o;
    o.with_lyapunov = true;
    o.lyap_iter = 2000;
    const auto fw = bifurcation_sweep(presets::base_family(), s, o);
    s.direction = Direction::backward;
    o.workers = 4;
    const auto bw = bifurcation_sweep(presets::base_family(), s, o);
    REQUIRE(fw.rows.size() == bw.rows.size());
    const std::size_t n = fw.rows.size();
    for (std::size_t i = 0; i < n; ++i) CHECK(same_row(fw.rows[i], bw.rows[n - 1 - i]));
}

TEST_CASE("inherit-final forward and backward scans disagree under multistability") {
    SweepSpec s;
    s.start = -8.0;
    s.stop = 2.0;
    s.n_points = 201;
    const auto fw = bifurcation_sweep(presets::base_family(), s);
    s.direction = Direction::backward;
    const auto bw = bifurcation_sweep(presets::base_family(), s);
    int witnesses = 0;
    for (std::size_t i = 0; i < fw.rows.size(); ++i) {
        const auto& a = fw.rows[i];
        const auto& b = bw.rows[fw.rows.size() - 1 - i];
        REQUIRE(a.param == b.param);
        const bool pa = a.branch_count <= 30, pb = b.branch_count <= 30;
        if ((pa || pb) && a.branch_count != b.branch_count) ++witnesses;
    }
    CHECK(witnesses >= 1);
}

TEST_CASE("period-doubling cascade between k=-3.8 and k=-3.7") {
    SweepSpec s;
    s.start = -3.8;
    s.stop = -3.7;
    s.n_points = 101;
    s.n_keep = 256;
    const auto d = bifurcation_sweep(presets::base_family(), s);
    // periodic part of the scan: counts step through 10, 20, 40 (x clusters may merge by one)
    std::vector<int> levels;
    for (const auto& r : d.rows) {
        if (r.branch_count > 64) break;
        if (levels.empty() || levels.back() != r.branch_count) levels.push_back(r.branch_count);
    }
    REQUIRE(levels.size() >= 3);
    CHECK(levels[0] == 10);
    CHECK(levels[1] == 20);
    CHECK(levels[2] >= 39);
    CHECK(levels[2] <= 40);
    CHECK(d.rows.back().branch_count > 200);
}

TEST_CASE("lyapunov sweep signs") {
    SweepSpec s;
    s.start = -0.3;
    s.stop = 7.6;
    s.n_points = 2;
    s.ic_policy = IcPolicy::fixed_ic;
    const auto rows = lyapunov_sweep(presets::base_family(), s, 50000, 2);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].exponents[0] > 0.0);
    CHECK(rows[1].exponents[0] < 0.0);
}

TEST_CASE("sweep2d: one-ulp grid, period row, worker invariance") {
    SweepSpec u;
    u.param = "c";
    u.start = 0.89;
    u.stop = std::nextafter(0.89, 1.0);
    u.n_points = 2;
    SweepSpec v;
    v.param = "k";
    v.start = -1.6;
    v.stop = std::nextafter(-1.6, 0.0);
    v.n_points = 2;
    Sweep2dConfig cfg;
    const auto g = sweep2d(presets::base_family(), u, v, cfg);
    REQUIRE(g.size() == 4);
    for (const auto& c : g) {
        CHECK(c.period_class == 6);
        CAPTURE(c.lmax);
        CAPTURE(g[0].lmax);
        CHECK(std::abs(c.lmax - g[0].lmax) < 1e-3);  // finite-time estimate, one ulp apart
    }

    u.start = 0.88;
    u.stop = 0.90;
    u.n_points = 3;
    v.start = -2.0;
    v.stop = -1.0;
    v.n_points = 3;
    cfg.workers = 1;
    const auto a = sweep2d(presets::base_family(), u, v, cfg);
    cfg.workers = 3;
    const auto b = sweep2d(presets::base_family(), u, v, cfg);
    REQUIRE(a.size() == 9);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].u == b[i].u);
        CHECK(a[i].v == b[i].v);
        CHECK(a[i].period_class == b[i].period_class);
        CHECK(std::memcmp(&a[i].lmax, &b[i].lmax, sizeof(double)) == 0);
    }
    CHECK(a[1].v == a[0].v);  // v-major
}
