#pragma once

#include "chialvo/fixed_points.hpp"
#include "chialvo/map.hpp"

#include <array>
#include <complex>
#include <limits>
#include <string>
#include <vector>

namespace chialvo {

struct ContinuationOptions {
    double step0 = 1e-3;
    double step_min = 1e-8;
    double step_max = 0.1;
    int n_max = 1000;
    double tol = 1e-10;  // on ||G||_inf
    int max_newton = 25;
    double p_min = -std::numeric_limits<double>::infinity();
    double p_max = std::numeric_limits<double>::infinity();
    int direction = +1;  // sign of the initial parameter change
};

struct BranchPoint {
    double param = 0.0;
    State state{};
    std::array<std::complex<double>, 3> eigenvalues{};
    double test_lp = 0.0;  // det(J - I)
    double test_pd = 0.0;  // det(J + I)
    double test_ns = 0.0;  // prod_{i<j} (l_i l_j - 1)
    bool stable = false;
    double residual = 0.0;  // ||G||_inf
};

struct Branch {
    std::string free_param;
    std::vector<BranchPoint> points;
    std::vector<std::string> diagnostics;
};

enum class EventKind { LP, PD, NS };
std::string to_string(EventKind k);

struct BifurcationEvent {
    EventKind kind = EventKind::LP;
    double param = 0.0;
    State state{};
    std::array<std::complex<double>, 3> eigenvalues{};
    double test_value = 0.0;
    std::size_t bracket = 0;  // event lies between points[bracket] and points[bracket + 1]
};

struct EventReport {
    std::vector<BifurcationEvent> events;
    std::vector<std::string> warnings;
};

// Fills eigenvalues, test functions and stability of a point at parameter value.
BranchPoint evaluate_point(const MapParams& p, const State& s, double param);

Branch continue_branch(const MapParams& base, const std::string& free_param,
                       const FixedPoint& start, const ContinuationOptions& opt = {});

EventReport detect_codim1(const MapParams& base, const Branch& branch, double ns_band = 0.05,
                          double param_tol = 1e-8, double corrector_tol = 1e-10);

}  // namespace chialvo
