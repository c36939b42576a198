#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <vector>

#include "biphoton/bessel.hpp"
#include "biphoton/core.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/fft.hpp"
#include "biphoton/mode_function.hpp"
#include "biphoton/quadrature.hpp"

// Orbital-angular-momentum decomposition of the heralded Stokes mode.
// The mode is a real centred Gaussian, so only even OAM indices carry
// weight and the spectrum is symmetric in +-m. Two independent routes:
// a radial quadrature with exponentially scaled Bessel kernels, and a
// brute-force polar sampling with an azimuthal FFT.

namespace biphoton {

/// Weights of the spiral modes, keyed by signed even OAM index.
/// m_max is the Bessel-order truncation: stored indices span -2*m_max to
/// +2*m_max. residual = 1 - sum of stored weights; above 1e-6 it marks a
/// truncated spectrum (non-fatal). max_odd_weight is a diagnostic filled
/// by the FFT oracle (exactly 0 for the quadrature route, which skips odd
/// indices by parity).
struct SpiralSpectrum {
    std::map<int, double> weights;
    int m_max = 0;
    double residual = 0;
    double max_odd_weight = 0;

    bool truncated() const { return residual > 1e-6; }

    double total() const {
        double sum = 0;
        for (const auto& [m, p] : weights)
            sum += p;
        return sum;
    }
};

/// Weight of the spiral mode with signed OAM index m. Odd m vanish by
/// parity. The radial integrand couples a Gaussian envelope to the square
/// of a modified Bessel function whose argument grows with the mode
/// anisotropy; it is evaluated in scaled form so the net exponent decays
/// like exp(-min(F,G) rho^2/2) with no overflow. Integration runs in
/// u = rho^2 out to net exponent -40.
inline double spiral_weight(const HeraldedCoefficients& h, int m) {
    h.validate();
    if (m % 2 != 0)
        return 0.0;
    const int order = std::abs(m) / 2;
    const double lo = std::min(h.F, h.G);
    const double anis = std::abs(h.G - h.F);
    const double prefactor = std::sqrt(h.F * h.G) / 2;
    const double u_max = 80.0 / lo;

    auto integrand = [&](double u) {
        const double scaled = bessel_i_scaled(order, anis * u / 8);
        return prefactor * std::exp(-lo * u / 2) * scaled * scaled;
    };

    QuadratureOptions opts;
    opts.abs_tol = 1e-10;
    opts.rel_tol = 1e-12;
    try {
        return integrate_adaptive(integrand, 0.0, u_max, opts);
    } catch (const quadrature_failure&) {
        throw quadrature_failure("spiral_weight: radial integral did not converge to 1e-10");
    }
}

/// Spectrum over OAM indices {-2*m_max, ..., 0, ..., +2*m_max}.
inline SpiralSpectrum spiral_spectrum(const HeraldedCoefficients& h, int m_max) {
    h.validate();
    if (m_max < 0)
        throw invalid_config("spiral_spectrum requires m_max >= 0");
    SpiralSpectrum spectrum;
    spectrum.m_max = m_max;
    double sum = 0;
    for (int k = 0; k <= m_max; ++k) {
        const double p = spiral_weight(h, 2 * k);
        spectrum.weights[2 * k] = p;
        if (k > 0) {
            spectrum.weights[-2 * k] = p;
            sum += 2 * p;
        } else {
            sum += p;
        }
    }
    spectrum.residual = 1.0 - sum;
    return spectrum;
}

/// Spectrum truncated automatically: the order grows until the last two
/// weights both drop below 1e-8, capped at Bessel order 64.
inline SpiralSpectrum spiral_spectrum_auto(const HeraldedCoefficients& h) {
    h.validate();
    constexpr int order_cap = 64;
    std::vector<double> partial;
    for (int k = 0; k <= order_cap; ++k) {
        partial.push_back(spiral_weight(h, 2 * k));
        const auto n = partial.size();
        if (n >= 3 && partial[n - 1] < 1e-8 && partial[n - 2] < 1e-8)
            break;
    }
    SpiralSpectrum spectrum;
    spectrum.m_max = static_cast<int>(partial.size()) - 1;
    double sum = 0;
    for (int k = 0; k < static_cast<int>(partial.size()); ++k) {
        spectrum.weights[2 * k] = partial[k];
        if (k > 0) {
            spectrum.weights[-2 * k] = partial[k];
            sum += 2 * partial[k];
        } else {
            sum += partial[k];
        }
    }
    spectrum.residual = 1.0 - sum;
    return spectrum;
}

/// Brute-force spectrum: samples heralded_stokes_amplitude on a polar
/// grid (Gauss-Legendre radii, uniform azimuth), Fourier-transforms each
/// ring, and integrates |a_m(rho)|^2 rho drho. Shares no code with
/// spiral_weight beyond the amplitude evaluator itself.
inline SpiralSpectrum spiral_spectrum_oracle(const HeraldedCoefficients& h,
                                             int radial_samples = 512,
                                             int azimuthal_samples = 512) {
    h.validate();
    if (radial_samples < 128)
        throw invalid_config("spiral_spectrum_oracle requires radial_samples >= 128");
    if (azimuthal_samples < 64 || !is_power_of_two(static_cast<std::size_t>(azimuthal_samples)))
        throw invalid_config("spiral_spectrum_oracle requires azimuthal_samples a power of two >= 64");
    if (radial_samples > 32768 || azimuthal_samples > 32768)
        throw resolution_failure("spiral_spectrum_oracle: requested resolution above the supported range");

    const int nr = radial_samples;
    const int na = azimuthal_samples;
    const double rho_max = std::sqrt(80.0 / std::min(h.F, h.G));

    std::vector<double> nodes, weights;
    gauss_legendre(nr, nodes, weights);

    std::vector<double> mode_power(na, 0.0);
    std::vector<std::complex<double>> ring(na);
    const double ring_to_coeff = std::sqrt(2 * std::numbers::pi) / na;
    for (int i = 0; i < nr; ++i) {
        const double rho = rho_max * (nodes[i] + 1) / 2;
        const double w = weights[i] * rho_max / 2;
        for (int j = 0; j < na; ++j) {
            const double theta = 2 * std::numbers::pi * j / na;
            ring[j] = heralded_stokes_amplitude(h, {rho * std::cos(theta), rho * std::sin(theta)}).re;
        }
        fft_inplace(ring);
        for (int b = 0; b < na; ++b) {
            const double coeff = std::abs(ring[b]) * ring_to_coeff;
            mode_power[b] += w * rho * coeff * coeff;
        }
    }

    // FFT bin b holds OAM index b for b < na/2 and b-na above; the
    // Nyquist bin is ambiguous and content there is negligible by
    // construction of the truncation rule below.
    auto power_at = [&](int m) {
        const int b = m >= 0 ? m : m + na;
        return mode_power[b];
    };

    const int order_cap = std::min(64, na / 4);
    int m_max = order_cap;
    for (int k = 2; k <= order_cap; ++k) {
        if (power_at(2 * k) < 1e-8 && power_at(2 * (k - 1)) < 1e-8) {
            m_max = k;
            break;
        }
    }

    SpiralSpectrum spectrum;
    spectrum.m_max = m_max;
    double sum = 0;
    for (int k = 0; k <= m_max; ++k) {
        const double p = power_at(2 * k);
        spectrum.weights[2 * k] = p;
        if (k > 0) {
            spectrum.weights[-2 * k] = power_at(-2 * k);
            sum += p + power_at(-2 * k);
        } else {
            sum += p;
        }
    }
    spectrum.residual = 1.0 - sum;
    for (int m = -na / 2 + 1; m < na / 2; m += 2)
        spectrum.max_odd_weight = std::max(spectrum.max_odd_weight, power_at(m));
    return spectrum;
}

/// Runs the FFT oracle at the requested and at doubled resolution and
/// throws resolution_failure if any weight moves by more than 1e-5.
inline SpiralSpectrum spiral_spectrum_oracle_checked(const HeraldedCoefficients& h,
                                                     int radial_samples = 512,
                                                     int azimuthal_samples = 512) {
    const auto coarse = spiral_spectrum_oracle(h, radial_samples, azimuthal_samples);
    const auto fine = spiral_spectrum_oracle(h, 2 * radial_samples, 2 * azimuthal_samples);
    for (const auto& [m, p] : fine.weights) {
        const auto it = coarse.weights.find(m);
        const double coarse_p = it == coarse.weights.end() ? 0.0 : it->second;
        if (std::abs(coarse_p - p) > 1e-5)
            throw resolution_failure("spiral_spectrum_oracle: weights not converged in resolution");
    }
    return fine;
}

} // namespace biphoton
