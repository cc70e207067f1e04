#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace chialvo {

struct MapParams {
    double a = 0.5;
    double b = 0.4;
    double c = 0.89;
    double k0 = -0.44;
    double k = 0.0;
    double alpha = 0.1;
    double beta = 0.1;
    double k1 = 0.1;
    double k2 = 0.2;
};

struct Map2Params {
    double a = 0.5;
    double b = 0.4;
    double c = 0.89;
    double k0 = -0.44;
};

struct State {
    double x = 0.0;
    double y = 0.0;
    double phi = 0.0;
};

struct State2 {
    double x = 0.0;
    double y = 0.0;
};

using Matrix3 = Eigen::Matrix3d;
using Matrix2 = Eigen::Matrix2d;
using Vector3 = Eigen::Vector3d;

inline double memductance(double alpha, double beta, double phi) {
    return alpha + 3.0 * beta * phi * phi;
}

State step3(const MapParams& p, const State& s);
State2 step2(double a, double b, double c, double k0, const State2& s);
inline State2 step2(const Map2Params& p, const State2& s) { return step2(p.a, p.b, p.c, p.k0, s); }

Matrix3 jacobian3(const MapParams& p, const State& s);
Matrix2 jacobian2(double a, double b, const State2& s);

// d(step3)/d(param) at fixed state, for continuation in any map parameter
Vector3 param_derivative(const MapParams& p, const State& s, std::string_view name);

inline bool finite(const State& s) {
    return std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.phi);
}
inline Vector3 to_vec(const State& s) { return {s.x, s.y, s.phi}; }
inline State to_state(const Vector3& v) { return {v(0), v(1), v(2)}; }
double max_abs_diff(const State& u, const State& v);

// names: a b c k0 k alpha beta k1 k2
const std::vector<std::string>& param_names();
bool is_param_name(std::string_view name);
double get_param(const MapParams& p, std::string_view name);
void set_param(MapParams& p, std::string_view name, double value);
MapParams with_param(MapParams p, std::string_view name, double value);

namespace presets {
// fixed-point / bifurcation family (k free)
MapParams base_family(double k = 0.0);
// invariant-curve family (a free)
MapParams closed_curve_family(double a = 0.838);
// firing time-series family (b, k free)
MapParams firing_family(double b = 0.9, double k = 0.0);
// network node parameters (k free)
MapParams network_family(double k = 3.5);
}  // namespace presets

}  // namespace chialvo
