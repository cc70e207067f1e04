#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chialvo/network.hpp"
#include "chialvo/rng.hpp"

#include <cmath>
#include <cstring>

using namespace chialvo;

namespace {

// direct transcription of the coupling sums for small N
std::vector<State> reference_step(const NetworkParams& np, const std::vector<State>& cur) {
    const int N = np.N;
    std::vector<State> out(cur.size());
    for (int m = 0; m < N; ++m) {
        State s = step3(np.map, cur[m]);
        if (m == 0) {
            for (int i = 1; i < N; ++i) s.x += np.mu * (cur[i].x - cur[0].x);
        } else {
            s.x += np.mu * (cur[0].x - cur[m].x);
            const int lo = np.hub_in_ring ? 0 : 1;
            const int n = N - lo;
            double acc = 0.0;
            for (int d = -np.R; d <= np.R; ++d) {
                const int j = lo + (((m - lo + d) % n) + n) % n;
                acc += cur[j].x - cur[m].x;
            }
            s.x += np.sigma / (2.0 * np.R) * acc;
        }
        out[m] = s;
    }
    return out;
}

std::vector<State> random_states(int n, std::uint64_t seed) {
    Xoshiro256ss rng(seed);
    std::vector<State> v;
    for (int i = 0; i < n; ++i) v.push_back({rng.uniform(-1, 2), rng.uniform(-1, 2), rng.uniform(-0.1, 0.1)});
    return v;
}

SpatiotemporalField field_from(const std::vector<double>& x) {
    SpatiotemporalField f;
    f.N = static_cast<int>(x.size());
    f.n_rows = 1;
    f.t = {0};
    f.x = x;
    for (double v : x) f.final_states.push_back({v, 0.0, 0.0});
    return f;
}

}  // namespace

TEST_CASE("coupling sums match a direct transcription") {
    for (bool hub : {true, false}) {
        NetworkParams np;
        np.N = 5;
        np.R = 1;
        np.sigma = 0.3;
        np.mu = 0.07;
        np.hub_in_ring = hub;
        const auto cur = random_states(5, 3);
        const auto a = network_step(np, cur), b = reference_step(np, cur);
        for (int i = 0; i < 5; ++i) CHECK(max_abs_diff(a[i], b[i]) < 1e-14);
        np.R = 2;
        const auto c = network_step(np, cur), d = reference_step(np, cur);
        for (int i = 0; i < 5; ++i) CHECK(max_abs_diff(c[i], d[i]) < 1e-14);
    }
}

TEST_CASE("decoupled limit is the single-node map") {
    NetworkParams np;
    np.N = 12;
    np.R = 3;
    const auto cur = random_states(12, 9);
    const auto nx = network_step(np, cur);
    for (int i = 0; i < 12; ++i) CHECK(max_abs_diff(nx[i], step3(np.map, cur[i])) == 0.0);
}

TEST_CASE("synchronous manifold is invariant") {
    NetworkParams np;
    np.N = 20;
    np.R = 4;
    np.sigma = 0.2;
    np.mu = 0.01;
    std::vector<State> cur(20, State{0.4, 0.3, 0.02});
    for (int t = 0; t < 200; ++t) {
        cur = network_step(np, cur);
        for (int i = 1; i < 20; ++i) REQUIRE(max_abs_diff(cur[i], cur[0]) == 0.0);
    }
}

TEST_CASE("parameter validation") {
    NetworkParams np;
    np.N = 10;
    np.R = 5;
    CHECK_THROWS_AS(np.validate(), std::invalid_argument);
    np.R = 4;
    CHECK_NOTHROW(np.validate());
    np.R = 0;
    CHECK_THROWS_AS(np.validate(), std::invalid_argument);
}

TEST_CASE("initial conditions are seeded and in range") {
    const auto a = random_network_ic(50, 42), b = random_network_ic(50, 42), c = random_network_ic(50, 43);
    bool differs = false;
    for (int i = 0; i < 50; ++i) {
        CHECK(max_abs_diff(a[i], b[i]) == 0.0);
        differs = differs || max_abs_diff(a[i], c[i]) > 0.0;
        CHECK(a[i].x >= 0.0);
        CHECK(a[i].x < 1.0);
        CHECK(a[i].y >= 0.0);
        CHECK(a[i].y < 1.0);
        CHECK(std::abs(a[i].phi) <= 0.1);
    }
    CHECK(differs);
}

TEST_CASE("simulation is deterministic across worker counts") {
    NetworkParams np;
    np.N = 40;
    np.R = 5;
    np.sigma = 0.005;
    np.mu = 0.001;
    const Schedule s{500, 50, 5};
    const auto a = simulate_network(np, 7, s, 1);
    const auto b = simulate_network(np, 7, s, 3);
    REQUIRE(a.x.size() == b.x.size());
    CHECK(std::memcmp(a.x.data(), b.x.data(), a.x.size() * sizeof(double)) == 0);
    // n_record rows, one every stride steps after the transient
    CHECK(a.n_rows == 50);
    CHECK(a.t.front() == 505);
    CHECK(a.t.back() == 750);
    CHECK(a.N == 40);
    REQUIRE(a.final_states.size() == 40);
}

TEST_CASE("recurrence matrix and clusters") {
    const std::vector<State> s{{0.0, 0, 0}, {0.005, 0, 0}, {0.012, 0, 0}, {1.0, 0, 0}, {1.004, 0, 0}};
    const auto r = recurrence_matrix(s, 0.01);
    REQUIRE(r.size() == 25);
    for (int i = 0; i < 5; ++i) {
        CHECK(r[i * 5 + i] == 1);
        for (int j = 0; j < 5; ++j) CHECK(r[i * 5 + j] == r[j * 5 + i]);
    }
    CHECK(r[0 * 5 + 2] == 0);
    CHECK(cluster_count(s, 0.01) == 2);  // single linkage joins 0, 1, 2
    const auto lab = cluster_labels(s, 0.01);
    CHECK(lab == std::vector<int>{0, 0, 0, 1, 1});
    CHECK(cluster_count(s, 1e-4) == 5);
    CHECK(cluster_count(s, 10.0) == 1);
}

TEST_CASE("classification of constructed fields") {
    Thresholds th;
    std::vector<double> same(30, 0.7);
    CHECK(coherence_profile_and_classify(field_from(same), 5, th).state_class == NetworkClass::SYNC);
    CHECK(sync_error(field_from(same)) < 1e-15);

    std::vector<double> two;
    for (int i = 0; i < 30; ++i) two.push_back(i % 2 ? 0.0 : 1.0);
    const auto d2 = coherence_profile_and_classify(field_from(two), 5, th);
    CHECK(d2.cluster_count == 2);
    CHECK(d2.state_class == NetworkClass::CLUSTERED);

    Xoshiro256ss rng(5);
    std::vector<double> chim, async;
    for (int i = 0; i < 30; ++i) chim.push_back(i < 15 ? 0.5 : rng.uniform(-1, 2));
    for (int i = 0; i < 30; ++i) async.push_back(rng.uniform(-1, 2));
    CHECK(coherence_profile_and_classify(field_from(chim), 5, th).state_class == NetworkClass::CHIMERA);
    CHECK(coherence_profile_and_classify(field_from(async), 5, th).state_class == NetworkClass::ASYNC);

    const auto prof = coherence_profile(std::vector<State>(10, State{1.0, 0, 0}), 3);
    for (double v : prof) CHECK(v == 0.0);
    CHECK_THROWS(coherence_profile(std::vector<State>(10), 4));
}

TEST_CASE("x-k scan seed policies") {
    NetworkParams np;
    np.N = 20;
    np.R = 3;
    np.mu = 0.005;
    const Schedule s{300, 1, 1};
    const auto a = xk_scan(np, -2.0, -1.5, 3, 11, SeedPolicy::same, s, 0.01, 1);
    const auto b = xk_scan(np, -2.0, -1.5, 3, 11, SeedPolicy::per_k, s, 0.01, 2);
    REQUIRE(a.size() == 3);
    CHECK(a[0].k == -2.0);
    CHECK(a[2].k == -1.5);
    for (const auto& r : a) CHECK(r.seed == 11);
    CHECK(b[1].seed == 12);
    CHECK(a[0].x_end == b[0].x_end);
    for (const auto& r : a) CHECK(r.x_end.size() == 20);
    CHECK(parse_seed_policy("per-k") == SeedPolicy::per_k);
    CHECK_THROWS(parse_seed_policy("other"));
}
