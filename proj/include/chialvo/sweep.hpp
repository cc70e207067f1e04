#pragma once

#include "chialvo/map.hpp"
#include "chialvo/orbit.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace chialvo {

enum class Direction { forward, backward };
enum class IcPolicy { fixed_ic, inherit_final };

std::string to_string(Direction d);
std::string to_string(IcPolicy p);
Direction parse_direction(const std::string& s);
IcPolicy parse_ic_policy(const std::string& s);

struct SweepSpec {
    std::string param = "k";
    double start = 0.0;
    double stop = 1.0;
    int n_points = 2;
    Direction direction = Direction::forward;
    long n_transient = 10000;
    long n_keep = 100;
    IcPolicy ic_policy = IcPolicy::inherit_final;
    State ic{0.1, 0.1, 0.0};
    double divergence_threshold = 1e6;

    // i-th grid value, i in [0, n_points)
    double value(int i) const;
    // grid indices in scan order
    std::vector<int> order() const;
    void validate() const;
};

struct BifurcationRow {
    double param = 0.0;
    std::vector<double> x;  // empty if diverged
    bool diverged = false;
    int branch_count = 0;
    std::optional<double> max_lyapunov;
};

struct BifurcationData {
    std::vector<BifurcationRow> rows;  // scan order
};

struct LyapunovRow {
    double param = 0.0;
    std::array<double, 3> exponents{};
    bool diverged = false;
};

struct SweepOptions {
    double cluster_tol = 1e-4;
    bool with_lyapunov = false;
    long lyap_iter = 20000;
    int workers = 1;  // used only under fixed-ic
};

int count_branches(std::vector<double> values, double cluster_tol = 1e-4);

BifurcationData bifurcation_sweep(const MapParams& base, const SweepSpec& spec,
                                  const SweepOptions& opt = {});

// spec.n_keep is ignored; the transient precedes each spectrum
std::vector<LyapunovRow> lyapunov_sweep(const MapParams& base, const SweepSpec& spec,
                                        long n_iter = 100000, int workers = 1);

struct Sweep2dConfig {
    OrbitConfig orbit{10000, 1000, 1e-6, 64, 1e6, 20000};
    State ic{0.1, 0.1, 0.0};
    int workers = 1;
};

struct Sweep2dCell {
    double u = 0.0;
    double v = 0.0;
    double lmax = 0.0;     // NaN when diverged
    int period_class = 0;  // period, 0 aperiodic, -1 diverged
};

// rows ordered v-major (all u for the first v, then the next v)
std::vector<Sweep2dCell> sweep2d(const MapParams& base, const SweepSpec& spec_u,
                                 const SweepSpec& spec_v, const Sweep2dConfig& cfg = {});

}  // namespace chialvo
