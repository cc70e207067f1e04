#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chialvo/continuation.hpp"
#include "chialvo/fixed_points.hpp"

#include <algorithm>
#include <cmath>

using namespace chialvo;

namespace {

Branch run(const MapParams& p, const std::string& name, int root, int dir, double lo, double hi,
           int n_max = 5000) {
    ContinuationOptions o;
    o.p_min = lo;
    o.p_max = hi;
    o.direction = dir;
    o.n_max = n_max;
    return continue_branch(p, name, find_fixed_points(p).roots.at(root), o);
}

int outside(const BranchPoint& b) {
    int n = 0;
    for (const auto& l : b.eigenvalues) n += std::abs(l) > 1.0;
    return n;
}

std::vector<double> params_of(const EventReport& r, EventKind k) {
    std::vector<double> v;
    for (const auto& e : r.events)
        if (e.kind == k) v.push_back(e.param);
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_CASE("corrector contract with n_max = 1") {
    const MapParams p = presets::base_family(7.6);
    const auto br = run(p, "k", 2, -1, -10, 10, 1);
    REQUIRE(!br.points.empty());
    for (const auto& b : br.points) {
        const MapParams q = with_param(p, "k", b.param);
        CHECK(max_abs_diff(step3(q, b.state), b.state) <= 1e-10);
    }
}

TEST_CASE("branch points satisfy the fixed-point equation and match classify") {
    const MapParams p = presets::base_family(7.6);
    const auto br = run(p, "k", 1, -1, -10, 10, 600);
    REQUIRE(br.points.size() >= 50);
    const std::size_t stride = br.points.size() / 50;
    for (std::size_t i = 0; i < br.points.size(); i += stride) {
        const auto& b = br.points[i];
        const MapParams q = with_param(p, "k", b.param);
        CHECK(max_abs_diff(step3(q, b.state), b.state) <= 1e-9);
        const auto rep = classify(q, FixedPoint{b.state.x, b.state.y, b.state.phi, 0.0});
        for (int j = 0; j < 3; ++j) CHECK(std::abs(std::abs(rep.eigenvalues[j]) - std::abs(b.eigenvalues[j])) < 1e-8);
        CHECK(b.stable == (rep.classification == Stability::stable));
    }
}

TEST_CASE("k branch of the base family carries LP and PD events") {
    const MapParams p = presets::base_family(7.6);
    const auto br = run(p, "k", 1, -1, -10, 10);
    const auto rep = detect_codim1(p, br);
    const auto lp = params_of(rep, EventKind::LP);
    const auto pd = params_of(rep, EventKind::PD);
    CHECK(lp.size() >= 1);
    CHECK(pd.size() >= 1);
    for (const auto& e : rep.events) {
        const MapParams q = with_param(p, "k", e.param);
        const Matrix3 j = jacobian3(q, e.state);
        if (e.kind == EventKind::LP) CHECK(std::abs((j - Matrix3::Identity()).determinant()) <= 1e-6);
        if (e.kind == EventKind::PD) {
            double best = 1e300;
            for (const auto& l : e.eigenvalues) best = std::min(best, std::abs(l + 1.0));
            CHECK(best <= 1e-4);
        }
        if (e.kind == EventKind::NS) {
            for (const auto& l : e.eigenvalues)
                if (std::abs(l.imag()) > 1e-12) CHECK(std::abs(std::abs(l) - 1.0) <= 1e-4);
        }
    }
}

TEST_CASE("free c at k=7.6 folds back") {
    const MapParams p = presets::base_family(7.6);
    const auto br = run(p, "c", 1, -1, -3, 3);
    bool up = false, down = false;
    for (std::size_t i = 1; i < br.points.size(); ++i) {
        const double d = br.points[i].param - br.points[i - 1].param;
        up = up || d > 0;
        down = down || d < 0;
    }
    CHECK(up);
    CHECK(down);
    const auto rep = detect_codim1(p, br);
    CHECK(params_of(rep, EventKind::LP).size() >= 2);
}

TEST_CASE("closed-curve family: events on the a branch") {
    const MapParams p = presets::closed_curve_family(0.83);
    const auto br = run(p, "a", 0, +1, 0.7, 0.95);
    const auto rep = detect_codim1(p, br);
    const auto lp = params_of(rep, EventKind::LP);
    const auto ns = params_of(rep, EventKind::NS);
    REQUIRE(lp.size() == 2);
    REQUIRE(ns.size() == 1);
    CHECK(lp[0] == doctest::Approx(0.823259).epsilon(1e-6));
    CHECK(lp[1] == doctest::Approx(0.838853).epsilon(1e-6));
    CHECK(ns[0] == doctest::Approx(0.901859).epsilon(1e-6));

    // eigenvalue count outside the unit circle is constant between events
    std::vector<std::size_t> cuts;
    for (const auto& e : rep.events) cuts.push_back(e.bracket);
    std::sort(cuts.begin(), cuts.end());
    std::size_t seg = 0;
    for (std::size_t i = 1; i < br.points.size(); ++i) {
        const bool crossed = seg < cuts.size() && cuts[seg] == i - 1;
        if (crossed) {
            while (seg < cuts.size() && cuts[seg] == i - 1) ++seg;
            continue;
        }
        CHECK(outside(br.points[i]) == outside(br.points[i - 1]));
    }
}

TEST_CASE("reversed direction reproduces event parameters") {
    const MapParams p = presets::closed_curve_family(0.83);
    const auto fw = detect_codim1(p, run(p, "a", 0, +1, 0.7, 0.95));
    // traverse the folds from the other end of the S-shaped segment
    const auto bw = detect_codim1(p, run(p, "a", 2, -1, 0.7, 0.95));
    const auto a = params_of(fw, EventKind::LP), b = params_of(bw, EventKind::LP);
    REQUIRE(a.size() == 2);
    REQUIRE(b.size() == 2);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-6);

    // approach the NS point from above
    const MapParams q = presets::closed_curve_family(0.93);
    const auto roots = find_fixed_points(q).roots;
    int upper = 0;
    for (std::size_t i = 0; i < roots.size(); ++i)
        if (std::abs(roots[i].x - 1.2) < std::abs(roots[upper].x - 1.2)) upper = static_cast<int>(i);
    const auto down = detect_codim1(q, run(q, "a", upper, -1, 0.85, 0.95));
    const auto ns_fw = params_of(fw, EventKind::NS), ns_bw = params_of(down, EventKind::NS);
    REQUIRE(ns_fw.size() == 1);
    REQUIRE(ns_bw.size() == 1);
    CHECK(std::abs(ns_fw[0] - ns_bw[0]) <= 1e-6);
}

TEST_CASE("event test values at simple points") {
    const BranchPoint b = evaluate_point(presets::base_family(7.6), find_fixed_points(presets::base_family(7.6)).roots.at(2).state(), 7.6);
    CHECK(b.stable);
    CHECK(b.test_lp != 0.0);
    CHECK(b.test_pd > 0.0);
    CHECK(b.residual < 1e-12);
}
