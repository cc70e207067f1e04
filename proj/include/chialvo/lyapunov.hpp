#pragma once

#include "chialvo/map.hpp"

#include <array>
#include <optional>
#include <stdexcept>

namespace chialvo {

struct DivergedOrbit : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateFrame : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LyapunovSpectrum {
    std::array<double, 3> exponents{};  // descending
    long n_iter = 0;
    State ic{};
    State final_state{};
    double mean_log_det = 0.0;  // orbit mean of log|det J|
};

// QR re-orthonormalisation every step. frame defaults to the identity.
LyapunovSpectrum lyapunov_spectrum(const MapParams& p, const State& ic, long n_transient = 10000,
                                   long n_iter = 100000,
                                   const std::optional<Matrix3>& frame = std::nullopt,
                                   double divergence_threshold = 1e6);

}  // namespace chialvo
