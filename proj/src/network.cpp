#include "chialvo/network.hpp"

#include "chialvo/orbit.hpp"
#include "chialvo/parallel.hpp"
#include "chialvo/rng.hpp"

#include <algorithm>
#include <barrier>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace chialvo {

void NetworkParams::validate() const {
    if (N < 3) throw std::invalid_argument("network needs N >= 3");
    const int ring = hub_in_ring ? N : N - 1;
    if (R < 1 || 2 * R > ring - 1) throw std::invalid_argument("need 1 <= R <= (ring size - 1)/2");
}

void network_step_range(const NetworkParams& np, const std::vector<State>& cur,
                        std::vector<State>& next, int begin, int end) {
    const MapParams& p = np.map;
    const int N = np.N;
    const int ring = np.hub_in_ring ? N : N - 1;
    const int off = np.hub_in_ring ? 0 : 1;
    const double rc = np.sigma / (2.0 * np.R);
    for (int m = begin; m < end; ++m) {
        State s = step3(p, cur[m]);
        const double xm = cur[m].x;
        if (m == 0) {
            double acc = 0.0;
            for (int i = 0; i < N; ++i) acc += cur[i].x - xm;
            s.x += np.mu * acc;
        } else {
            s.x += np.mu * (cur[0].x - xm);
            const int r = m - off;
            double acc = 0.0;
            for (int d = -np.R; d <= np.R; ++d) acc += cur[off + ((r + d) % ring + ring) % ring].x - xm;
            s.x += rc * acc;
        }
        next[m] = s;
    }
}

std::vector<State> network_step(const NetworkParams& np, const std::vector<State>& cur) {
    if (static_cast<int>(cur.size()) != np.N) throw std::invalid_argument("state count must equal N");
    std::vector<State> next(cur.size());
    network_step_range(np, cur, next, 0, np.N);
    return next;
}

std::vector<State> random_network_ic(int N, std::uint64_t seed) {
    Xoshiro256ss rng(seed);
    std::vector<State> s(static_cast<std::size_t>(N));
    for (auto& v : s) {
        v.x = rng.uniform(0.0, 1.0);
        v.y = rng.uniform(0.0, 1.0);
        v.phi = rng.uniform(-0.1, 0.1);
    }
    return s;
}

SpatiotemporalField simulate_network(const NetworkParams& np, std::uint64_t seed, const Schedule& sched,
                                     int workers, double divergence_threshold) {
    np.validate();
    if (sched.n_record < 1 || sched.stride < 1 || sched.n_transient < 0)
        throw std::invalid_argument("bad network schedule");
    SpatiotemporalField f;
    f.N = np.N;
    f.seed = seed;
    f.stride = sched.stride;
    std::vector<State> cur = random_network_ic(np.N, seed), next(cur.size());
    const long total = sched.n_transient + sched.n_record * sched.stride;
    f.x.reserve(static_cast<std::size_t>(sched.n_record) * np.N);

    auto record = [&](long n) {
        if (n <= sched.n_transient || (n - sched.n_transient) % sched.stride != 0) return;
        f.t.push_back(n);
        for (const auto& s : cur) f.x.push_back(s.x);
        ++f.n_rows;
    };
    auto check = [&](long n) {
        for (const auto& s : cur)
            if (diverged_state(s, divergence_threshold)) {
                f.diverged = true;
                f.divergence_step = n;
                return false;
            }
        return true;
    };

    const int w = std::clamp(workers, 1, np.N);
    if (w == 1) {
        for (long n = 1; n <= total; ++n) {
            network_step_range(np, cur, next, 0, np.N);
            std::swap(cur, next);
            if (!check(n)) break;
            record(n);
        }
    } else {
        // node partitions share a barrier per step; the completion step swaps buffers
        long n = 0;
        bool stop = false;
        auto on_done = [&]() noexcept {
            ++n;
            std::swap(cur, next);
            if (!check(n)) stop = true;
            else record(n);
            if (n >= total) stop = true;
        };
        std::barrier sync(w, on_done);
        auto body = [&](int id) {
            const int b = np.N * id / w, e = np.N * (id + 1) / w;
            while (!stop) {
                network_step_range(np, cur, next, b, e);
                sync.arrive_and_wait();
            }
        };
        if (total > 0) {
            std::vector<std::thread> pool;
            for (int id = 1; id < w; ++id) pool.emplace_back(body, id);
            body(0);
            for (auto& t : pool) t.join();
        }
    }
    f.final_states = cur;
    return f;
}

double sync_error(const SpatiotemporalField& f) {
    if (f.diverged) throw std::invalid_argument("sync_error of a diverged field");
    if (f.n_rows == 0) return 0.0;
    double acc = 0.0;
    for (long r = 0; r < f.n_rows; ++r) {
        double mean = 0.0;
        for (int i = 0; i < f.N; ++i) mean += f.at(r, i);
        mean /= f.N;
        double var = 0.0;
        for (int i = 0; i < f.N; ++i) var += (f.at(r, i) - mean) * (f.at(r, i) - mean);
        acc += std::sqrt(var / f.N);
    }
    return acc / static_cast<double>(f.n_rows);
}

std::vector<std::uint8_t> recurrence_matrix(const std::vector<State>& s, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    const std::size_t n = s.size();
    std::vector<std::uint8_t> m(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i * n + j] = std::abs(s[i].x - s[j].x) <= eps ? 1 : 0;
    return m;
}

namespace {
struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};
}  // namespace

std::vector<int> cluster_labels(const std::vector<State>& s, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    const int n = static_cast<int>(s.size());
    UnionFind uf(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(s[i].x - s[j].x) <= eps) uf.unite(i, j);
    std::vector<int> id(static_cast<std::size_t>(n), -1), out(static_cast<std::size_t>(n));
    int next = 0;
    for (int i = 0; i < n; ++i) {
        const int r = uf.find(i);
        if (id[r] < 0) id[r] = next++;
        out[i] = id[r];
    }
    return out;
}

int cluster_count(const std::vector<State>& s, double eps) {
    const auto l = cluster_labels(s, eps);
    return l.empty() ? 0 : *std::max_element(l.begin(), l.end()) + 1;
}

std::string to_string(NetworkClass c) {
    switch (c) {
        case NetworkClass::SYNC: return "SYNC";
        case NetworkClass::CLUSTERED: return "CLUSTERED";
        case NetworkClass::CHIMERA: return "CHIMERA";
        case NetworkClass::ASYNC: return "ASYNC";
    }
    return "?";
}

std::vector<double> coherence_profile(const std::vector<State>& s, int window_w) {
    if (window_w < 3 || window_w % 2 == 0) throw std::invalid_argument("window_w must be odd and >= 3");
    const int n = static_cast<int>(s.size());
    const int h = window_w / 2;
    std::vector<double> prof(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        double mean = 0.0;
        for (int d = -h; d <= h; ++d) mean += s[((m + d) % n + n) % n].x;
        mean /= window_w;
        double var = 0.0;
        for (int d = -h; d <= h; ++d) {
            const double v = s[((m + d) % n + n) % n].x - mean;
            var += v * v;
        }
        prof[m] = std::sqrt(var / window_w);
    }
    return prof;
}

namespace {

// longest circular runs of coherent (true) and incoherent (false) nodes
std::pair<int, int> longest_runs(const std::vector<bool>& coh) {
    const int n = static_cast<int>(coh.size());
    int best_c = 0, best_i = 0;
    if (std::all_of(coh.begin(), coh.end(), [](bool b) { return b; })) return {n, 0};
    if (std::none_of(coh.begin(), coh.end(), [](bool b) { return b; })) return {0, n};
    int start = 0;
    while (coh[start] == coh[(start + n - 1) % n]) ++start;  // begin at a run boundary
    int len = 0;
    bool cur = coh[start];
    for (int k = 0; k < n; ++k) {
        const bool v = coh[(start + k) % n];
        if (v == cur) {
            ++len;
        } else {
            (cur ? best_c : best_i) = std::max(cur ? best_c : best_i, len);
            cur = v;
            len = 1;
        }
    }
    (cur ? best_c : best_i) = std::max(cur ? best_c : best_i, len);
    return {best_c, best_i};
}

}  // namespace

NetworkDiagnostics coherence_profile_and_classify(const SpatiotemporalField& f, int window_w,
                                                  const Thresholds& th) {
    NetworkDiagnostics d;
    d.sync_error = sync_error(f);
    const auto& s = f.final_states;
    d.cluster_count = cluster_count(s, th.eps);
    d.coherence_profile = coherence_profile(s, window_w);
    d.recurrence = recurrence_matrix(s, th.eps);

    if (d.sync_error < th.sync_threshold) {
        d.state_class = NetworkClass::SYNC;
        return d;
    }
    if (d.cluster_count <= th.max_clusters) {
        const auto lab = cluster_labels(s, th.eps);
        bool tight = true;
        for (int c = 0; c < d.cluster_count && tight; ++c) {
            double sum = 0.0, sq = 0.0;
            int cnt = 0;
            for (std::size_t i = 0; i < s.size(); ++i)
                if (lab[i] == c) {
                    sum += s[i].x;
                    sq += s[i].x * s[i].x;
                    ++cnt;
                }
            const double mean = sum / cnt;
            tight = std::sqrt(std::max(0.0, sq / cnt - mean * mean)) <= th.cluster_sd;
        }
        if (tight) {
            d.state_class = NetworkClass::CLUSTERED;
            return d;
        }
    }
    std::vector<bool> coh(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) coh[i] = d.coherence_profile[i] < th.coherent_sd;
    const auto [rc, ri] = longest_runs(coh);
    d.state_class = (rc >= th.min_run && ri >= th.min_run) ? NetworkClass::CHIMERA : NetworkClass::ASYNC;
    return d;
}

SeedPolicy parse_seed_policy(const std::string& s) {
    if (s == "same") return SeedPolicy::same;
    if (s == "per-k") return SeedPolicy::per_k;
    throw std::invalid_argument("seed_policy must be 'same' or 'per-k'");
}

std::string to_string(SeedPolicy p) { return p == SeedPolicy::same ? "same" : "per-k"; }

std::vector<XkRow> xk_scan(const NetworkParams& base, double k_min, double k_max, int n_k,
                           std::uint64_t seed, SeedPolicy policy, const Schedule& sched, double eps,
                           int workers) {
    if (n_k < 2) throw std::invalid_argument("xk_scan needs n_k >= 2");
    base.validate();
    std::vector<XkRow> rows(static_cast<std::size_t>(n_k));
    parallel_for(rows.size(), workers, [&](std::size_t i) {
        XkRow& r = rows[i];
        r.k = i + 1 == rows.size() ? k_max : k_min + (k_max - k_min) * static_cast<double>(i) / (n_k - 1);
        r.seed = policy == SeedPolicy::same ? seed : seed + i;
        NetworkParams np = base;
        np.map.k = r.k;
        const auto f = simulate_network(np, r.seed, sched, 1);
        r.diverged = f.diverged;
        if (!f.diverged) {
            for (const auto& s : f.final_states) r.x_end.push_back(s.x);
            r.cluster_count = cluster_count(f.final_states, eps);
        }
    });
    return rows;
}

}  // namespace chialvo
