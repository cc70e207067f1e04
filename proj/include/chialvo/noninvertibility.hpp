#pragma once

#include "chialvo/map.hpp"

#include <vector>

namespace chialvo {

struct Window2 {
    double x_min = -2.0, x_max = 12.0;
    double y_min = -4.0, y_max = 4.0;
};

struct Window3 {
    double x_min = -2.0, x_max = 12.0;
    double y_min = -4.0, y_max = 4.0;
    double phi_min = -1.0, phi_max = 1.0;
};

struct CriticalSet {
    bool surface = false;        // false: planar curve with phi = 0
    std::vector<State> points;   // samples on the zero set
    std::vector<double> residuals;
};

// det of the 2D Jacobian: e^{y-x} (2ax - ax^2 + bx^2)
double lc_residual2(double a, double b, const State2& s);
// det of the 3D Jacobian (same sign as det jacobian3)
double lc_residual3(const MapParams& p, const State& s);

// zero contour of lc_residual2 on an nx-by-ny node grid: sign changes on
// grid edges are polished by bisection; exact zeros at nodes are kept as is
CriticalSet extract_lc2(double a, double b, const Window2& w, int nx, int ny);

// images of a planar set under step2, applied n times (n = 1 gives LC from LC_{-1})
std::vector<State2> image2(const Map2Params& p, const std::vector<State2>& pts, int n = 1);
std::vector<State2> planar(const CriticalSet& cs);

// scattered samples of the 3D critical surface, found along x-lines of the grid
CriticalSet extract_lc3(const MapParams& p, const Window3& w, int nx, int ny, int nphi);

struct PreimageSearch {
    double x_min = -10.0;
    double x_max = 20.0;
    int grid_n = 40001;
};

struct Preimages2 {
    int count = 0;
    std::vector<State2> points;
};
struct Preimages3 {
    int count = 0;
    std::vector<State> points;
};

// y (and phi) eliminated through the linear map components; roots in x by
// sign change plus bisection
Preimages2 preimages2(const Map2Params& p, const State2& target, const PreimageSearch& ps = {});
Preimages3 preimages3(const MapParams& p, const State& target, const PreimageSearch& ps = {});

inline int count_preimages(const Map2Params& p, const State2& t, const PreimageSearch& ps = {}) {
    return preimages2(p, t, ps).count;
}
inline int count_preimages(const MapParams& p, const State& t, const PreimageSearch& ps = {}) {
    return preimages3(p, t, ps).count;
}

}  // namespace chialvo
