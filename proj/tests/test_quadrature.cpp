#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "biphoton/quadrature.hpp"

using namespace biphoton;
using Catch::Approx;

TEST_CASE("adaptive quadrature on smooth integrands") {
    CHECK(integrate_adaptive([](double x) { return x * x; }, 0.0, 1.0) ==
          Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(integrate_adaptive([](double x) { return std::exp(x); }, -1.0, 1.0) ==
          Approx(std::exp(1.0) - std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("adaptive quadrature resolves a narrow Gaussian in a wide window") {
    const double value =
        integrate_adaptive([](double x) { return std::exp(-x * x / 2); }, -40.0, 40.0);
    CHECK(value == Approx(std::sqrt(2 * std::numbers::pi)).epsilon(1e-12));

    // off-centre and narrower
    const double narrow = integrate_adaptive(
        [](double x) { return std::exp(-(x - 17.0) * (x - 17.0) * 1e4 / 2); }, -40.0, 40.0);
    CHECK(narrow == Approx(std::sqrt(2 * std::numbers::pi) / 100).epsilon(1e-10));
}

TEST_CASE("quadrature failure is reported, not silenced") {
    QuadratureOptions opts;
    opts.abs_tol = 1e-15;
    opts.rel_tol = 0;
    opts.max_panels = 24;
    CHECK_THROWS_AS(
        integrate_adaptive([](double x) { return std::sin(1.0 / (x + 1e-12)); }, 0.0, 1.0, opts),
        quadrature_failure);
}

TEST_CASE("gauss-legendre nodes integrate polynomials exactly") {
    std::vector<double> nodes, weights;
    gauss_legendre(5, nodes, weights);
    double sum = 0, x8 = 0;
    for (int i = 0; i < 5; ++i) {
        sum += weights[i];
        x8 += weights[i] * std::pow(nodes[i], 8);
    }
    CHECK(sum == Approx(2.0).epsilon(1e-14));
    CHECK(x8 == Approx(2.0 / 9.0).epsilon(1e-13)); // degree 8 < 2n-1 = 9

    gauss_legendre(24, nodes, weights);
    double expv = 0;
    for (int i = 0; i < 24; ++i)
        expv += weights[i] * std::exp(nodes[i]);
    CHECK(expv == Approx(std::exp(1.0) - std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("gauss-legendre handles odd and even orders") {
    for (int n : {1, 2, 3, 7, 128, 513}) {
        std::vector<double> nodes, weights;
        gauss_legendre(n, nodes, weights);
        double sum = 0;
        for (double w : weights) {
            CHECK(w > 0);
            sum += w;
        }
        CHECK(sum == Approx(2.0).epsilon(1e-13));
        for (int i = 1; i < n; ++i)
            CHECK(nodes[i] > nodes[i - 1]);
    }
}
