#pragma once

#include "chialvo/map.hpp"

#include <complex>
#include <string>
#include <vector>

namespace chialvo {

// Coefficient of the cubic flux term after eliminating phi.
// consistent: (1 + k2)^2, which follows from phi = k1 x / (1 + k2).
// printed:    1 + k2^2, kept for comparison with reference values.
enum class FluxDenominator { consistent, printed };

std::string to_string(FluxDenominator d);
FluxDenominator parse_flux_denominator(const std::string& s);

struct FixedPoint {
    double x = 0.0;
    double y = 0.0;
    double phi = 0.0;
    double residual = 0.0;
    State state() const { return {x, y, phi}; }
};

enum class Stability { stable, saddle, repelling };
std::string to_string(Stability s);

struct StabilityReport {
    std::array<std::complex<double>, 3> eigenvalues;  // descending modulus
    Stability classification = Stability::saddle;
    bool has_complex_pair = false;
};

struct RootSearch {
    double x_min = -5.0;
    double x_max = 15.0;
    int grid_n = 20001;
    double tol = 1e-10;
    FluxDenominator denominator = FluxDenominator::consistent;
};

struct FixedPointResult {
    std::vector<FixedPoint> roots;
    // grid locations where |residual| < sqrt(tol) without a sign change
    std::vector<double> possible_tangencies;
};

double fp_residual(const MapParams& p, double x,
                   FluxDenominator d = FluxDenominator::consistent);
double fp_residual_derivative(const MapParams& p, double x,
                              FluxDenominator d = FluxDenominator::consistent);

// (x, y, phi) with y and phi eliminated linearly
FixedPoint lift_fixed_point(const MapParams& p, double x,
                            FluxDenominator d = FluxDenominator::consistent);

FixedPointResult find_fixed_points(const MapParams& p, const RootSearch& rs = {});

std::array<std::complex<double>, 3> eigenvalues3(const Matrix3& m);
StabilityReport classify_matrix(const Matrix3& m);
StabilityReport classify(const MapParams& p, const FixedPoint& fp);

}  // namespace chialvo
