#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "biphoton/oam.hpp"

using namespace biphoton;
using Catch::Approx;

namespace {
// heralded widths of the reference transverse-emission geometry
const HeraldedCoefficients fig2c{14759.725400457666, 254131.45539906103};
} // namespace

TEST_CASE("isotropic heralded mode carries only the fundamental") {
    const HeraldedCoefficients iso{12345.6, 12345.6};
    CHECK(spiral_weight(iso, 0) == Approx(1.0).margin(1e-9));
    CHECK(spiral_weight(iso, 2) == Approx(0.0).margin(1e-12));
    CHECK(spiral_weight(iso, 1) == 0.0);
    CHECK(spiral_weight(iso, -7) == 0.0);
}

TEST_CASE("spiral weights match 40-digit reference values") {
    CHECK(spiral_weight(fig2c, 0) == Approx(0.64974185932280454).margin(1e-8));
    CHECK(spiral_weight(fig2c, 2) == Approx(0.12381194746622848).margin(1e-8));
    CHECK(spiral_weight(fig2c, 4) == Approx(0.03495541365233253).margin(1e-8));
    CHECK(spiral_weight(fig2c, 8) == Approx(0.0035847967737854703).margin(1e-8));
    CHECK(spiral_weight(fig2c, -2) == spiral_weight(fig2c, 2));
}

TEST_CASE("spectrum completeness and symmetry at the reference geometry") {
    const auto spectrum = spiral_spectrum(fig2c, 20);
    CHECK(spectrum.total() >= 1.0 - 1e-6);
    CHECK(spectrum.total() + spectrum.residual == Approx(1.0).margin(1e-12));
    CHECK(spectrum.weights.at(-6) == spectrum.weights.at(6));
    CHECK(spectrum.weights.size() == 41);

    // the fundamental dominates and the +-2 modes are the next largest
    CHECK(spectrum.weights.at(0) > spectrum.weights.at(2));
    for (int m = 4; m <= 40; m += 2)
        CHECK(spectrum.weights.at(2) > spectrum.weights.at(m));
}

TEST_CASE("exchanging F and G leaves every weight unchanged") {
    const HeraldedCoefficients swapped{fig2c.G, fig2c.F};
    for (int m : {0, 2, 4, 6, 10})
        CHECK(spiral_weight(fig2c, m) == Approx(spiral_weight(swapped, m)).epsilon(1e-12));
}

TEST_CASE("fundamental weight decreases away from isotropy") {
    const double F = fig2c.F;
    double prev = 1.1;
    for (double ratio : {1.0, 2.0, 4.0, 8.0, 16.0}) {
        const double p0 = spiral_weight({F, ratio * F}, 0);
        CHECK(p0 < prev);
        if (ratio > 1.0)
            CHECK(p0 < 1.0);
        prev = p0;
    }
}

TEST_CASE("auto truncation reaches the stated residual") {
    const auto spectrum = spiral_spectrum_auto(fig2c);
    CHECK(std::abs(spectrum.residual) <= 1e-6);
    CHECK(spectrum.weights.at(2 * spectrum.m_max) < 1e-8);
    CHECK(spectrum.weights.at(2 * (spectrum.m_max - 1)) < 1e-8);

    const auto iso = spiral_spectrum_auto({500.0, 500.0});
    CHECK(iso.m_max == 2);
    CHECK(iso.weights.at(0) == Approx(1.0).margin(1e-9));
}

TEST_CASE("a too-small truncation order is carried as residual, not hidden") {
    const auto spectrum = spiral_spectrum(fig2c, 2);
    CHECK(spectrum.truncated());
    CHECK(spectrum.residual > 1e-3);
}

TEST_CASE("fft oracle agrees with the quadrature entrywise") {
    const auto quad = spiral_spectrum_auto(fig2c);
    const auto fft = spiral_spectrum_oracle(fig2c);
    for (const auto& [m, p] : quad.weights) {
        const auto it = fft.weights.find(m);
        const double other = it == fft.weights.end() ? 0.0 : it->second;
        INFO("m=" << m);
        CHECK(std::abs(p - other) <= 1e-4);
    }
    CHECK(fft.max_odd_weight <= 1e-12);
}

TEST_CASE("two routes agree at strong anisotropy") {
    const HeraldedCoefficients strong{2000.0, 200000.0}; // width ratio 100
    const auto quad = spiral_spectrum_auto(strong);
    const auto fft = spiral_spectrum_oracle(strong);
    CHECK(std::abs(quad.residual) < 1e-6);
    for (const auto& [m, p] : quad.weights) {
        const auto it = fft.weights.find(m);
        const double other = it == fft.weights.end() ? 0.0 : it->second;
        INFO("m=" << m);
        CHECK(std::abs(p - other) <= 1e-4);
    }
}

TEST_CASE("fft oracle on an isotropic mode") {
    const auto spectrum = spiral_spectrum_oracle({5000.0, 5000.0});
    CHECK(spectrum.weights.at(0) == Approx(1.0).margin(1e-6));
    CHECK(spectrum.max_odd_weight <= 1e-12);
}

TEST_CASE("fft oracle resolution contract") {
    CHECK_THROWS_AS(spiral_spectrum_oracle(fig2c, 64, 512), invalid_config);
    CHECK_THROWS_AS(spiral_spectrum_oracle(fig2c, 512, 100), invalid_config);
    CHECK_THROWS_AS(spiral_spectrum_oracle(fig2c, 512, 32), invalid_config);
    CHECK_THROWS_AS(spiral_spectrum_oracle(fig2c, 300000, 512), resolution_failure);
    CHECK_NOTHROW(spiral_spectrum_oracle_checked(fig2c, 256, 256));
}

TEST_CASE("spiral operations validate their inputs") {
    CHECK_THROWS_AS(spiral_weight({0, 1}, 0), invalid_config);
    CHECK_THROWS_AS(spiral_spectrum({1, 1}, -2), invalid_config);
}
