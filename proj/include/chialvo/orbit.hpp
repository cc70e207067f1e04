#pragma once

#include "chialvo/map.hpp"

#include <optional>
#include <string>
#include <vector>

namespace chialvo {

struct Trajectory {
    std::vector<State> states;  // the last n_keep states (fewer if diverged)
    bool diverged = false;
    std::optional<long> divergence_step;  // 1-based map application count
};

struct OrbitConfig {
    long n_transient = 10000;
    long n_keep = 1000;
    double tol = 1e-6;
    int max_period = 64;
    double divergence_threshold = 1e6;
    long lyap_iter = 100000;  // used only for aperiodic tails
};

// fixed_point is period 1. aperiodic means no period found and max_lyapunov <= 0
// (quasi-periodic invariant curves or slow transients).
enum class AttractorKind { fixed_point, periodic, chaotic, aperiodic, diverged };
std::string to_string(AttractorKind k);

struct BoundingBox {
    State lo{};
    State hi{};
};

struct AttractorRecord {
    AttractorKind kind = AttractorKind::diverged;
    int period = 0;
    std::vector<State> points;  // phase order, rotated to start at the lexicographic minimum
    double max_lyapunov = 0.0;
    BoundingBox bbox;

    bool is_periodic() const {
        return kind == AttractorKind::fixed_point || kind == AttractorKind::periodic;
    }
};

bool diverged_state(const State& s, double threshold);

Trajectory iterate(const MapParams& p, const State& ic, long n_transient, long n_keep,
                   double divergence_threshold = 1e6);

std::optional<int> detect_period(const Trajectory& traj, double tol, int max_period);
std::optional<int> detect_period(const std::vector<State>& tail, double tol, int max_period);

BoundingBox bounding_box(const std::vector<State>& states);
// one period of the tail, rotated so the lexicographically smallest point leads
std::vector<State> canonical_cycle(const std::vector<State>& tail, int period);

AttractorRecord fingerprint(const MapParams& p, const State& ic, const OrbitConfig& cfg = {});

// per-coordinate intersection-over-union of two boxes, minimum over coordinates
double box_overlap(const BoundingBox& u, const BoundingBox& v);

std::optional<std::size_t> match_attractor(const AttractorRecord& rec,
                                           const std::vector<AttractorRecord>& catalog,
                                           double match_tol);

}  // namespace chialvo
