#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "biphoton/core.hpp"
#include "biphoton/errors.hpp"

// Schmidt number of the two-photon spatial state: the closed form
// K = (A+B)(C+D)/(4 sqrt(ABCD)) and a discretize-and-decompose oracle.
// The amplitude factorizes exactly between the x and y axes, so the
// oracle builds two 1-D Nystrom kernels, takes the singular values of
// each (the kernels are symmetric, so these are the absolute eigenvalues
// of a self-adjoint solve), and merges the normalized squared spectra as
// a tensor product.

namespace biphoton {

struct SchmidtResult {
    double K = 0;
    double Kx = 0; // x-axis factor (A, B)
    double Ky = 0; // y-axis factor (C, D)
    /// Merged Schmidt eigenvalues, non-increasing, summing to 1 up to the
    /// merge truncation. Populated by the oracle only.
    std::vector<double> eigenvalues;
};

/// One-axis Schmidt factor (a+b)/(2 sqrt(ab)) >= 1, equal to 1 iff a = b.
inline double schmidt_number_1d(double a, double b) {
    if (!(a > 0) || !(b > 0) || !std::isfinite(a) || !std::isfinite(b))
        throw invalid_config("schmidt_number_1d requires positive finite widths");
    return (a + b) / (2 * std::sqrt(a * b));
}

/// Closed-form Schmidt number K = Kx * Ky with the per-axis factors.
inline SchmidtResult schmidt_number(const BiphotonCoefficients& c) {
    c.validate();
    SchmidtResult r;
    r.Kx = schmidt_number_1d(c.A, c.B);
    r.Ky = schmidt_number_1d(c.C, c.D);
    r.K = r.Kx * r.Ky;
    return r;
}

namespace detail {

struct AxisSpectrum {
    std::vector<double> lambdas; // normalized squared singular values, non-increasing
    double K = 0;
};

// Nystrom discretization of the one-axis kernel on a uniform grid of
// half-width 8/sqrt(min(a,b)), which holds the widest marginal beyond
// 1e-14 tail mass. Singular values below 1e-15 of the largest are noise
// and are dropped before normalization.
inline AxisSpectrum axis_schmidt_spectrum(double a, double b, int grid_points) {
    const int n = grid_points;
    const double half = 8.0 / std::sqrt(std::min(a, b));
    const double dq = 2 * half / (n - 1);
    const double prefactor = std::pow(a * b, 0.25) / std::sqrt(std::numbers::pi);

    Eigen::MatrixXd kernel(n, n);
    for (int i = 0; i < n; ++i) {
        const double qi = -half + i * dq;
        for (int j = 0; j <= i; ++j) {
            const double qj = -half + j * dq;
            const double sum = qi + qj;
            const double diff = qi - qj;
            const double value = prefactor * std::exp(-(a * sum * sum + b * diff * diff) / 4) * dq;
            kernel(i, j) = value;
            kernel(j, i) = value;
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(kernel, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw resolution_failure("axis kernel eigendecomposition failed");

    std::vector<double> sigma;
    sigma.reserve(n);
    for (int i = 0; i < n; ++i)
        sigma.push_back(std::abs(solver.eigenvalues()[i]));
    std::sort(sigma.begin(), sigma.end(), std::greater<>());
    const double cutoff = 1e-15 * sigma.front();
    while (!sigma.empty() && sigma.back() < cutoff)
        sigma.pop_back();

    AxisSpectrum spectrum;
    double mass = 0;
    for (double s : sigma)
        mass += s * s;
    double sum_sq = 0;
    spectrum.lambdas.reserve(sigma.size());
    for (double s : sigma) {
        const double lambda = s * s / mass;
        spectrum.lambdas.push_back(lambda);
        sum_sq += lambda * lambda;
    }
    spectrum.K = 1.0 / sum_sq;
    return spectrum;
}

} // namespace detail

/// Brute-force Schmidt result at the given per-axis grid resolution.
/// The merged eigenvalue list keeps tensor products until the cumulative
/// mass reaches 1 - 1e-10.
inline SchmidtResult schmidt_oracle_svd(const BiphotonCoefficients& c, int grid_points) {
    c.validate();
    if (grid_points < 256)
        throw invalid_config("schmidt_oracle_svd requires grid_points >= 256");
    if (grid_points > 8192)
        throw resolution_failure("schmidt_oracle_svd: grid_points above the supported range");

    const auto x = detail::axis_schmidt_spectrum(c.A, c.B, grid_points);
    const auto y = detail::axis_schmidt_spectrum(c.C, c.D, grid_points);

    // Per-axis spectra decay geometrically; trim each to 1 - 1e-12 of its
    // mass before crossing to keep the product list small.
    auto trim = [](const std::vector<double>& lambdas) {
        std::vector<double> kept;
        double cum = 0;
        for (double l : lambdas) {
            kept.push_back(l);
            cum += l;
            if (cum >= 1.0 - 1e-12)
                break;
        }
        return kept;
    };
    const auto lx = trim(x.lambdas);
    const auto ly = trim(y.lambdas);

    std::vector<double> merged;
    merged.reserve(lx.size() * ly.size());
    for (double a : lx)
        for (double b : ly)
            merged.push_back(a * b);
    std::sort(merged.begin(), merged.end(), std::greater<>());

    SchmidtResult r;
    r.Kx = x.K;
    r.Ky = y.K;
    double cum = 0, sum_sq = 0;
    for (double l : merged) {
        r.eigenvalues.push_back(l);
        cum += l;
        sum_sq += l * l;
        if (cum >= 1.0 - 1e-10)
            break;
    }
    r.K = 1.0 / sum_sq;
    return r;
}

/// Doubling check: throws resolution_failure if K moves by more than
/// relative 1e-4 between grid_points and 2*grid_points. Returns the finer
/// result.
inline SchmidtResult schmidt_oracle_svd_checked(const BiphotonCoefficients& c, int grid_points) {
    if (2 * grid_points > 8192)
        throw resolution_failure(
            "schmidt_oracle_svd: the doubling check needs grid_points <= 4096");
    const auto coarse = schmidt_oracle_svd(c, grid_points);
    const auto fine = schmidt_oracle_svd(c, 2 * grid_points);
    if (std::abs(fine.K - coarse.K) > 1e-4 * fine.K)
        throw resolution_failure("schmidt_oracle_svd: K not converged in grid resolution");
    return fine;
}

} // namespace biphoton
