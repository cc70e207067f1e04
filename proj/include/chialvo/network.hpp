#pragma once

#include "chialvo/map.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chialvo {

struct NetworkParams {
    MapParams map = presets::network_family();
    int N = 100;
    int R = 10;
    double sigma = 0.0;  // ring coupling
    double mu = 0.0;     // star coupling
    // true: node 0 is the hub and also a ring member, ring over all N nodes.
    // false: ring over nodes 1..N-1 only.
    bool hub_in_ring = true;

    void validate() const;
};

// synchronous update of nodes [begin, end) from the frozen snapshot cur
void network_step_range(const NetworkParams& np, const std::vector<State>& cur,
                        std::vector<State>& next, int begin, int end);
std::vector<State> network_step(const NetworkParams& np, const std::vector<State>& cur);

struct Schedule {
    long n_transient = 20000;
    long n_record = 1000;
    long stride = 1;
};

struct SpatiotemporalField {
    int N = 0;
    long n_rows = 0;              // recorded time steps
    std::vector<long> t;          // step index of each recorded row
    std::vector<double> x;        // n_rows x N, row-major
    std::vector<State> final_states;
    std::uint64_t seed = 0;
    long stride = 1;
    bool diverged = false;
    std::optional<long> divergence_step;

    double at(long row, int node) const { return x[static_cast<std::size_t>(row) * N + node]; }
};

std::vector<State> random_network_ic(int N, std::uint64_t seed);

SpatiotemporalField simulate_network(const NetworkParams& np, std::uint64_t seed,
                                     const Schedule& sched = {}, int workers = 1,
                                     double divergence_threshold = 1e6);

double sync_error(const SpatiotemporalField& f);

std::vector<std::uint8_t> recurrence_matrix(const std::vector<State>& s, double eps);
int cluster_count(const std::vector<State>& s, double eps);
// cluster id per node (ids in order of first appearance)
std::vector<int> cluster_labels(const std::vector<State>& s, double eps);

enum class NetworkClass { SYNC, CLUSTERED, CHIMERA, ASYNC };
std::string to_string(NetworkClass c);

struct Thresholds {
    double sync_threshold = 0.1687;  // log-midpoint of decoupled and sigma=0.005 runs
    double eps = 0.01;          // recurrence / cluster radius on x
    int max_clusters = 5;       // "few" clusters for CLUSTERED
    double cluster_sd = 0.01;   // tight cluster: within-cluster std of x
    double coherent_sd = 0.01;  // local std below this marks a coherent node
    int min_run = 5;
};

struct NetworkDiagnostics {
    double sync_error = 0.0;
    int cluster_count = 0;
    std::vector<double> coherence_profile;
    NetworkClass state_class = NetworkClass::ASYNC;
    std::vector<std::uint8_t> recurrence;
};

std::vector<double> coherence_profile(const std::vector<State>& s, int window_w);

NetworkDiagnostics coherence_profile_and_classify(const SpatiotemporalField& f, int window_w = 5,
                                                  const Thresholds& th = {});

enum class SeedPolicy { same, per_k };
SeedPolicy parse_seed_policy(const std::string& s);
std::string to_string(SeedPolicy p);

struct XkRow {
    double k = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> x_end;  // N values
    bool diverged = false;
    int cluster_count = 0;
};

std::vector<XkRow> xk_scan(const NetworkParams& base, double k_min, double k_max, int n_k,
                           std::uint64_t seed, SeedPolicy policy, const Schedule& sched = {},
                           double eps = 0.01, int workers = 1);

}  // namespace chialvo
