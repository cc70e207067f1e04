#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chialvo/fixed_points.hpp"
#include "chialvo/lyapunov.hpp"

#include <cmath>

using namespace chialvo;

TEST_CASE("sum of exponents equals the mean log determinant") {
    for (double k : {-0.3, -1.6, 7.6}) {
        const auto s = lyapunov_spectrum(presets::base_family(k), {0.1, 0.1, 0.0}, 5000, 50000);
        const double sum = s.exponents[0] + s.exponents[1] + s.exponents[2];
        CAPTURE(k);
        CHECK(std::abs(sum - s.mean_log_det) < 1e-8);
        CHECK(s.exponents[0] >= s.exponents[1]);
        CHECK(s.exponents[1] >= s.exponents[2]);
    }
}

TEST_CASE("stable focus: exponents equal log eigenvalue moduli") {
    const MapParams p = presets::base_family(7.6);
    const auto f = find_fixed_points(p).roots.at(2);
    const auto rep = classify(p, f);
    const auto s = lyapunov_spectrum(p, {1.75, 1.9, 0.14}, 10000, 100000);
    CHECK(std::abs(s.exponents[0] - std::log(std::abs(rep.eigenvalues[0]))) < 2e-3);
    CHECK(std::abs(s.exponents[0] - std::log(std::abs(std::complex<double>(0.7453, 0.4697)))) < 2e-3);
    CHECK(std::abs(s.exponents[2] - std::log(std::abs(rep.eigenvalues[2]))) < 2e-3);
}

TEST_CASE("chaotic regime has a positive exponent") {
    const auto s = lyapunov_spectrum(presets::base_family(-0.3), {0.1, 0.1, 0.0}, 10000, 100000);
    CHECK(s.exponents[0] > 0.3);
    CHECK(s.n_iter == 100000);
}

TEST_CASE("spectrum does not depend on the initial frame") {
    const MapParams p = presets::base_family(-0.3);
    Matrix3 f;
    f << 1, 2, 0, 0, 1, 3, 1, 0, 1;
    const auto a = lyapunov_spectrum(p, {0.1, 0.1, 0.0}, 10000, 100000);
    const auto b = lyapunov_spectrum(p, {0.1, 0.1, 0.0}, 10000, 100000, f);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(a.exponents[i] - b.exponents[i]) < 1e-3);
}

TEST_CASE("degenerate frame and divergence are reported") {
    const MapParams p = presets::base_family(-0.3);
    Matrix3 f = Matrix3::Identity();
    f.col(2) = f.col(0);
    CHECK_THROWS_AS(lyapunov_spectrum(p, {0.1, 0.1, 0.0}, 10, 100, f), DegenerateFrame);
    CHECK_THROWS_AS(lyapunov_spectrum(presets::base_family(20.0), {0.1, 0.1, 0.0}, 10000, 1000), DivergedOrbit);
}
