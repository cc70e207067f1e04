#pragma once

#include "chialvo/map.hpp"
#include "chialvo/noninvertibility.hpp"
#include "chialvo/orbit.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace chialvo {

inline constexpr int kLabelDivergent = -1;
inline constexpr int kLabelUnresolved = -2;

struct BasinConfig {
    long max_iter = 50000;
    long n_keep = 1000;       // tail used for the final classification
    long min_transient = 1000;
    long check_every = 500;   // early periodic exit test interval
    double tol = 1e-6;
    int max_period = 64;
    double match_tol = 1e-4;
    double divergence_threshold = 1e6;
    long lyap_iter = 20000;
    int workers = 1;
    int block_rows = 8;
};

struct BasinGrid {
    Window2 window;
    int nx = 0, ny = 0;
    double phi0 = 0.0;
    std::vector<int> labels;  // row-major, index iy * nx + ix
    std::vector<AttractorRecord> catalog;

    int label(int ix, int iy) const { return labels[static_cast<std::size_t>(iy) * nx + ix]; }
    double x0(int ix) const { return window.x_min + (ix + 0.5) * (window.x_max - window.x_min) / nx; }
    double y0(int iy) const { return window.y_min + (iy + 0.5) * (window.y_max - window.y_min) / ny; }
};

BasinGrid compute_basin(const MapParams& p, const Window2& window, int nx, int ny, double phi0,
                        const BasinConfig& cfg = {});

struct BasinStatistics {
    std::map<int, long> counts;
    std::map<int, double> fractions;
};
BasinStatistics basin_statistics(const BasinGrid& g);

// 1 where a 4-neighbour carries a different label
std::vector<std::uint8_t> boundary_mask(const BasinGrid& g);

// catalog index of `other` expressed in `ref` labels; unmatched entries map to nullopt
std::vector<std::optional<int>> remap_catalog(const BasinGrid& ref, const BasinGrid& other,
                                              double match_tol);

// fraction of non-boundary cells of ref whose label agrees with other (same grid shape)
double label_agreement(const BasinGrid& ref, const BasinGrid& other, double match_tol);

struct LocatorConfig {
    double k_min = -8.0;
    double k_max = 8.0;
    int n_k = 1601;
    int restarts = 3;
    std::uint64_t seed = 1;
    Window2 ic_box{-1.0, 3.0, -1.0, 3.0};
    double phi_lo = -0.1, phi_hi = 0.1;
    OrbitConfig orbit{10000, 1000, 1e-6, 64, 1e6, 20000};
    double match_tol = 1e-4;
    std::vector<int> required_periods{6, 9};
    int required_count = 3;
    int workers = 1;
};

struct LocatorRow {
    double k = 0.0;
    std::vector<AttractorRecord> attractors;  // distinct, non-diverged
    bool any_diverged = false;
};

struct LocatorResult {
    std::vector<LocatorRow> rows;
    std::optional<double> k_found;  // first k meeting the requirement
    double best_k = 0.0;            // most distinct attractors (ties: first)
};

LocatorResult locate_multistability(const MapParams& base, const LocatorConfig& cfg);

}  // namespace chialvo
