#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "biphoton/schmidt.hpp"

using namespace biphoton;
using Catch::Approx;

namespace {
// wide-pump large-cloud reference geometry (R=1000, w0=500, w1=100)
const BiphotonCoefficients fig4_collinear{116111.11111111111, 5000, 5000, 116111.11111111111};
const BiphotonCoefficients fig4_transverse{116111.11111111111, 5000, 5000, 45000};
} // namespace

TEST_CASE("one-axis Schmidt factor") {
    CHECK(schmidt_number_1d(1, 1) == 1.0);
    CHECK(schmidt_number_1d(4, 1) == Approx(1.25).epsilon(1e-15));
    CHECK(schmidt_number_1d(9, 1) == Approx(5.0 / 3.0).epsilon(1e-15));
    CHECK(schmidt_number_1d(3, 7) == schmidt_number_1d(7, 3));
    CHECK_THROWS_AS(schmidt_number_1d(0, 1), invalid_config);
}

TEST_CASE("closed-form Schmidt number at the reference geometries") {
    CHECK(schmidt_number({1, 1, 1, 1}).K == 1.0);
    CHECK(schmidt_number(fig4_collinear).K == Approx(6.31632110579479).epsilon(1e-12));
    CHECK(schmidt_number(fig4_transverse).K == Approx(4.188715364522341).epsilon(1e-12));
    CHECK(schmidt_number(fig4_transverse).Ky == Approx(5.0 / 3.0).epsilon(1e-14));
    CHECK(schmidt_number(fig4_collinear).eigenvalues.empty());
}

TEST_CASE("K factorizes per axis and matches the direct formula") {
    std::mt19937 rng(7040);
    std::uniform_real_distribution<double> log_c(2.0, 7.0);
    for (int i = 0; i < 1000; ++i) {
        const BiphotonCoefficients c{std::pow(10.0, log_c(rng)), std::pow(10.0, log_c(rng)),
                                     std::pow(10.0, log_c(rng)), std::pow(10.0, log_c(rng))};
        const auto r = schmidt_number(c);
        CHECK(r.K == r.Kx * r.Ky);
        const double direct = (c.A + c.B) * (c.C + c.D) / (4 * std::sqrt(c.A * c.B * c.C * c.D));
        CHECK(r.K == Approx(direct).epsilon(1e-13));
        CHECK(r.K >= 1.0 - 1e-12);
    }
}

TEST_CASE("K is scale invariant") {
    std::mt19937 rng(7041);
    std::uniform_real_distribution<double> log_s(-3.0, 4.0);
    const auto base = schmidt_number(fig4_transverse).K;
    for (int i = 0; i < 100; ++i) {
        const double s = std::pow(10.0, log_s(rng));
        const auto scaled = schmidt_number(
            {fig4_transverse.A * s, fig4_transverse.B * s, fig4_transverse.C * s,
             fig4_transverse.D * s});
        CHECK(scaled.K == Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("spectral oracle reproduces the closed form") {
    const auto closed = schmidt_number(fig4_collinear);
    const auto oracle = schmidt_oracle_svd(fig4_collinear, 512);
    CHECK(std::abs(oracle.K - closed.K) <= 1e-3 * closed.K);
    CHECK(std::abs(oracle.K - 6.316) < 0.006);
    CHECK(oracle.Kx == Approx(closed.Kx).epsilon(1e-3));
    CHECK(oracle.Ky == Approx(closed.Ky).epsilon(1e-3));
}

TEST_CASE("spectral oracle on a separable state finds a single mode") {
    const auto oracle = schmidt_oracle_svd({3000, 3000, 3000, 3000}, 256);
    CHECK(oracle.K == Approx(1.0).margin(1e-9));
    REQUIRE_FALSE(oracle.eigenvalues.empty());
    CHECK(oracle.eigenvalues.front() == Approx(1.0).margin(1e-9));
}

TEST_CASE("oracle eigenvalue list is a distribution and determines K") {
    const auto oracle = schmidt_oracle_svd(fig4_transverse, 512);
    double sum = 0, sum_sq = 0;
    double prev = 2.0;
    for (double l : oracle.eigenvalues) {
        CHECK(l >= 0.0);
        CHECK(l <= prev);
        prev = l;
        sum += l;
        sum_sq += l * l;
    }
    CHECK(sum == Approx(1.0).margin(1e-6));
    CHECK(oracle.K == Approx(1.0 / sum_sq).epsilon(1e-12));
}

TEST_CASE("per-axis eigenvalues decay geometrically") {
    const auto axis = detail::axis_schmidt_spectrum(4.0, 1.0, 512);
    REQUIRE(axis.lambdas.size() >= 7);
    const double expected_ratio = axis.lambdas[1] / axis.lambdas[0];
    for (int i = 1; i < 6; ++i) {
        const double ratio = axis.lambdas[i + 1] / axis.lambdas[i];
        CHECK(ratio == Approx(expected_ratio).epsilon(1e-3));
    }
    // analytic ratio: lambda ~ mu^{2n} with mu = (sqrt(a)-sqrt(b))/(sqrt(a)+sqrt(b)) = 1/3
    CHECK(expected_ratio == Approx(1.0 / 9.0).epsilon(1e-6));
}

TEST_CASE("stronger spatial filtering reduces the entanglement") {
    // wide-pump geometry at collinear emission, widening filter ladder
    const double pump_cloud = 111111.11111111111; // w0=500, R=1000
    double prev = 1e300;
    for (double w1 : {50.0, 100.0, 200.0, 400.0}) {
        const double filter = w1 * w1 / 2;
        const BiphotonCoefficients c{pump_cloud + filter, filter, filter, pump_cloud + filter};
        const double k = schmidt_number(c).K;
        CHECK(k <= prev);
        prev = k;
    }
}

TEST_CASE("oracle grid contract") {
    CHECK_THROWS_AS(schmidt_oracle_svd(fig4_collinear, 128), invalid_config);
    CHECK_THROWS_AS(schmidt_oracle_svd(fig4_collinear, 10000), resolution_failure);
    CHECK_NOTHROW(schmidt_oracle_svd_checked(fig4_collinear, 256));
}
