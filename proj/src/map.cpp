#include "chialvo/map.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chialvo {

State step3(const MapParams& p, const State& s) {
    const double e = std::exp(s.y - s.x);
    return {s.x * s.x * e + p.k0 + p.k * s.x * memductance(p.alpha, p.beta, s.phi),
            p.a * s.y - p.b * s.x + p.c,
            p.k1 * s.x - p.k2 * s.phi};
}

State2 step2(double a, double b, double c, double k0, const State2& s) {
    return {s.x * s.x * std::exp(s.y - s.x) + k0, a * s.y - b * s.x + c};
}

Matrix3 jacobian3(const MapParams& p, const State& s) {
    const double e = std::exp(s.y - s.x);
    Matrix3 j;
    j << e * (2.0 * s.x - s.x * s.x) + p.k * memductance(p.alpha, p.beta, s.phi),
        s.x * s.x * e, 6.0 * p.k * s.x * p.beta * s.phi,
        -p.b, p.a, 0.0,
        p.k1, 0.0, -p.k2;
    return j;
}

Matrix2 jacobian2(double a, double b, const State2& s) {
    const double e = std::exp(s.y - s.x);
    Matrix2 j;
    j << e * (2.0 * s.x - s.x * s.x), s.x * s.x * e,
        -b, a;
    return j;
}

Vector3 param_derivative(const MapParams& p, const State& s, std::string_view name) {
    if (name == "a") return {0.0, s.y, 0.0};
    if (name == "b") return {0.0, -s.x, 0.0};
    if (name == "c") return {0.0, 1.0, 0.0};
    if (name == "k0") return {1.0, 0.0, 0.0};
    if (name == "k") return {s.x * memductance(p.alpha, p.beta, s.phi), 0.0, 0.0};
    if (name == "alpha") return {p.k * s.x, 0.0, 0.0};
    if (name == "beta") return {3.0 * p.k * s.x * s.phi * s.phi, 0.0, 0.0};
    if (name == "k1") return {0.0, 0.0, s.x};
    if (name == "k2") return {0.0, 0.0, -s.phi};
    throw std::invalid_argument("unknown map parameter '" + std::string(name) + "'");
}

double max_abs_diff(const State& u, const State& v) {
    return std::max({std::abs(u.x - v.x), std::abs(u.y - v.y), std::abs(u.phi - v.phi)});
}

const std::vector<std::string>& param_names() {
    static const std::vector<std::string> names{"a", "b", "c", "k0", "k", "alpha", "beta", "k1", "k2"};
    return names;
}

bool is_param_name(std::string_view name) {
    const auto& n = param_names();
    return std::find(n.begin(), n.end(), name) != n.end();
}

namespace {
double* field(MapParams& p, std::string_view name) {
    if (name == "a") return &p.a;
    if (name == "b") return &p.b;
    if (name == "c") return &p.c;
    if (name == "k0") return &p.k0;
    if (name == "k") return &p.k;
    if (name == "alpha") return &p.alpha;
    if (name == "beta") return &p.beta;
    if (name == "k1") return &p.k1;
    if (name == "k2") return &p.k2;
    throw std::invalid_argument("unknown map parameter '" + std::string(name) + "'");
}
}  // namespace

double get_param(const MapParams& p, std::string_view name) {
    MapParams q = p;
    return *field(q, name);
}

void set_param(MapParams& p, std::string_view name, double value) { *field(p, name) = value; }

MapParams with_param(MapParams p, std::string_view name, double value) {
    set_param(p, name, value);
    return p;
}

namespace presets {

MapParams base_family(double k) {
    return {0.5, 0.4, 0.89, -0.44, k, 0.1, 0.1, 0.1, 0.2};
}

MapParams closed_curve_family(double a) {
    return {a, 0.18, 0.28, 0.06, -0.2, 0.1, 0.2, 0.1, 0.2};
}

MapParams firing_family(double b, double k) {
    return {0.6, b, 1.4, 0.1, k, 0.1, 0.1, 0.1, 0.2};
}

MapParams network_family(double k) {
    return {0.89, 0.6, 0.28, 0.04, k, 0.1, 0.2, 0.1, 0.2};
}

}  // namespace presets
}  // namespace chialvo
