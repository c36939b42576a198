#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "biphoton/core.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/quadrature.hpp"

// The two-photon amplitude in the transverse-wavevector domain: the
// closed-form double Gaussian, the heralded single-photon mode, and an
// interaction-volume integral that keeps the pump's longitudinal
// wavevector exact and reduces to the closed form for short clouds.

namespace biphoton {

struct TransverseWavevector {
    double qx = 0; // rad/um
    double qy = 0; // rad/um

    void validate() const {
        if (!std::isfinite(qx) || !std::isfinite(qy))
            throw invalid_config("transverse wavevector components must be finite");
    }
};

/// The three wavevector-mismatch rows weighted by the cloud Gaussians:
/// delta0 and delta1 by the transverse size R, delta2 by the length L.
struct PhaseMismatch {
    double delta0 = 0; // rad/um
    double delta1 = 0; // rad/um
    double delta2 = 0; // rad/um
};

/// One sample of the two-photon (or heralded one-photon) amplitude.
/// Real for the closed form; the volume integral carries both parts.
/// Units are um^2 for the pair amplitude (|value|^2 integrates to a
/// dimensionless probability over the 4-D wavevector space).
struct AmplitudeSample {
    double re = 0;
    double im = 0;

    double magnitude() const { return std::hypot(re, im); }
};

/// Double-Gaussian pair amplitude. Positive everywhere, peaks at the
/// origin with value (ABCD)^{1/4}/pi, symmetric under exchanging the two
/// photons and under inverting both wavevectors.
inline AmplitudeSample eval_closed_form(const BiphotonCoefficients& c,
                                        TransverseWavevector q_s,
                                        TransverseWavevector q_as) {
    c.validate();
    q_s.validate();
    q_as.validate();
    const double sum_x = q_s.qx + q_as.qx;
    const double diff_x = q_s.qx - q_as.qx;
    const double diff_y = q_s.qy - q_as.qy;
    const double sum_y = q_s.qy + q_as.qy;
    const double prefactor = std::pow(c.A * c.B * c.C * c.D, 0.25) / std::numbers::pi;
    const double exponent = -(c.A * sum_x * sum_x + c.B * diff_x * diff_x +
                              c.C * diff_y * diff_y + c.D * sum_y * sum_y) / 4;
    return {prefactor * std::exp(exponent), 0.0};
}

namespace detail {

// Integral of eval_closed_form^2 over one transverse axis pair,
// sampled through the public evaluator. The squared amplitude along one
// axis is a correlated 2-D Gaussian with ridge coordinates known from the
// coefficients, so the inner window is centred on the ridge; windows are
// 8 sigma, truncating below 1e-13 of the mass.
template <class Sampler>
double squared_axis_integral(double sum_coeff, double diff_coeff, Sampler&& sample) {
    const double outer_half = 8.0 * std::sqrt(1.0 / sum_coeff + 1.0 / diff_coeff) / 2.0;
    const double inner_sigma = 1.0 / std::sqrt(sum_coeff + diff_coeff);
    const double ridge_slope = -(sum_coeff - diff_coeff) / (sum_coeff + diff_coeff);

    QuadratureOptions inner_opts;
    inner_opts.abs_tol = 0.0;
    inner_opts.rel_tol = 1e-13;
    QuadratureOptions outer_opts;
    outer_opts.abs_tol = 0.0;
    outer_opts.rel_tol = 1e-11;

    auto outer = [&](double q1) {
        const double centre = ridge_slope * q1;
        auto inner = [&](double q2) {
            const double v = sample(q1, q2);
            return v * v;
        };
        return integrate_adaptive(inner, centre - 8 * inner_sigma, centre + 8 * inner_sigma,
                                  inner_opts);
    };
    return integrate_adaptive(outer, -outer_half, outer_half, outer_opts);
}

} // namespace detail

/// Numerically integrates |Phi|^2 over the full 4-D wavevector space and
/// returns the result, which must equal 1 for any valid coefficient set.
/// The squared amplitude factorizes exactly between the x and y axis
/// pairs, so the 4-D integral is evaluated as the product of two 2-D
/// adaptive quadratures, both sampled through eval_closed_form.
inline double normalization_check(const BiphotonCoefficients& c) {
    c.validate();
    const double peak = eval_closed_form(c, {0, 0}, {0, 0}).re;
    try {
        const double x_block = detail::squared_axis_integral(
            c.A, c.B, [&](double q1, double q2) {
                return eval_closed_form(c, {q1, 0}, {q2, 0}).re;
            });
        const double y_block = detail::squared_axis_integral(
            c.D, c.C, [&](double q1, double q2) {
                return eval_closed_form(c, {0, q1}, {0, q2}).re;
            });
        return x_block * y_block / (peak * peak);
    } catch (const quadrature_failure&) {
        throw quadrature_failure("normalization_check: adaptive refinement did not reach 1e-9");
    }
}

/// Stokes mode after the partner photon is projected on a Gaussian;
/// unit L2 norm over the transverse plane, peak (FG)^{1/4}/sqrt(2*pi).
inline AmplitudeSample heralded_stokes_amplitude(const HeraldedCoefficients& h,
                                                 TransverseWavevector q_s) {
    h.validate();
    q_s.validate();
    const double prefactor = std::pow(h.F * h.G, 0.25) / std::sqrt(2 * std::numbers::pi);
    return {prefactor * std::exp(-(h.F * q_s.qx * q_s.qx + h.G * q_s.qy * q_s.qy) / 4), 0.0};
}

/// The three mismatch rows at given photon wavevectors. delta0 and delta1
/// do not involve the pump's longitudinal wavevector; it is computed from
/// them as k_p = sqrt((omega_p n_p/c)^2 - delta0^2 - delta1^2) and then
/// enters delta2. Throws evanescent_pump when the square root argument is
/// not positive.
inline PhaseMismatch phase_mismatch(const ExperimentConfig& config,
                                    const PhaseMatchingInputs& in,
                                    TransverseWavevector q_s,
                                    TransverseWavevector q_as) {
    config.validate();
    in.validate();
    q_s.validate();
    q_as.validate();
    const double phi = config.emission_angle;
    const double sin_phi = std::sin(phi);
    const double cos_phi = std::cos(phi);

    PhaseMismatch pm;
    pm.delta0 = q_s.qx + q_as.qx;
    pm.delta1 = (in.k_s - in.k_as) * sin_phi + (q_s.qy - q_as.qy) * cos_phi;
    const double k_pump_central = in.omega_p * config.refractive_index / speed_of_light_um_s;
    const double k_p_sq = k_pump_central * k_pump_central - pm.delta0 * pm.delta0 - pm.delta1 * pm.delta1;
    if (!(k_p_sq > 0))
        throw evanescent_pump("transverse mismatch exceeds the pump wavenumber");
    const double k_p = std::sqrt(k_p_sq);
    pm.delta2 = k_p - in.k_c - (in.k_s + in.k_as) * cos_phi + (q_s.qy - q_as.qy) * sin_phi;
    return pm;
}

/// Pair amplitude from the interaction-volume integral. The pump and
/// control Gaussian spectra enter through their exact convolution, a
/// single Gaussian weight exp(-w0^2 |Q|^2/8) in the summed transverse
/// wavevector Q; the cloud contributes mismatch Gaussians of width R on
/// the two transverse rows and width L on the longitudinal row; detection
/// filters of width w1 multiply both photon legs. The pump's longitudinal
/// wavevector keeps its exact dependence on the transverse mismatches,
/// which is the only physics beyond eval_closed_form: for clouds much
/// shorter than every Rayleigh range the two agree after normalization.
/// The anti-Stokes transverse y axis is oriented so that the y-sum
/// combination carries the cloud widths, matching the coefficient
/// placement of eval_closed_form.
///
/// The returned amplitude is unnormalized (constant spectral prefactors
/// are dropped); compare shapes, not absolute values.
inline AmplitudeSample eval_full_integral(const ExperimentConfig& config,
                                          const PhaseMatchingInputs& in,
                                          TransverseWavevector q_s,
                                          TransverseWavevector q_as) {
    config.validate();
    in.validate();
    q_s.validate();
    q_as.validate();

    const double phi = config.emission_angle;
    const double sin_phi = std::sin(phi);
    const double cos_phi = std::cos(phi);
    const double R = config.cloud_transverse_size;
    const double L = config.cloud_length;
    const double w0 = config.pump_waist;
    const double w1 = config.detection_filter_width;

    const double sum_x = q_s.qx + q_as.qx;
    const double sum_y = q_s.qy + q_as.qy;
    const double dk_s_as = in.k_s - in.k_as;
    const double row1_unshifted = dk_s_as * sin_phi + sum_y * cos_phi;
    const double k_pump_central = in.omega_p * config.refractive_index / speed_of_light_um_s;

    const double filter =
        std::exp(-w1 * w1 *
                 (q_s.qx * q_s.qx + q_s.qy * q_s.qy + q_as.qx * q_as.qx + q_as.qy * q_as.qy) / 4);

    // Window each Q component on the product of the convolution weight and
    // the cloud factor it shifts; both are Gaussians, combined curvature cx.
    const double conv_curv = w0 * w0 / 8;
    const double cloud_curv = R * R / 4;
    const double cx = conv_curv + cloud_curv;
    const double half = 8.0 / std::sqrt(cx);
    const double qx_centre = cloud_curv * sum_x / cx;
    const double qy_centre = cloud_curv * row1_unshifted / cx;

    QuadratureOptions inner_opts;
    inner_opts.abs_tol = 1e-14 * 2 * half;
    inner_opts.rel_tol = 1e-11;
    QuadratureOptions outer_opts;
    outer_opts.abs_tol = 1e-14 * 4 * half * half;
    outer_opts.rel_tol = 1e-10;

    auto outer = [&](double Qx) {
        const double row0 = sum_x - Qx;
        auto inner = [&](double Qy) {
            const double row1 = row1_unshifted - Qy;
            const double k_p_sq = k_pump_central * k_pump_central - row0 * row0 - row1 * row1;
            if (!(k_p_sq > 0))
                throw evanescent_pump("transverse mismatch exceeds the pump wavenumber");
            const double k_p = std::sqrt(k_p_sq);
            const double row2 = k_p - in.k_c - dk_s_as * cos_phi + sum_y * sin_phi;
            return std::exp(-w0 * w0 * (Qx * Qx + Qy * Qy) / 8 -
                            (row0 * row0 + row1 * row1) * R * R / 4 - row2 * row2 * L * L / 4);
        };
        return integrate_adaptive(inner, qy_centre - half, qy_centre + half, inner_opts);
    };

    double value;
    try {
        value = integrate_adaptive(outer, qx_centre - half, qx_centre + half, outer_opts);
    } catch (const quadrature_failure&) {
        throw quadrature_failure("eval_full_integral: adaptive refinement failed");
    }
    return {filter * value, 0.0};
}

/// Relative L2 distance between the volume integral and the closed form
/// on an n x n grid of photon wavevector pairs spanning +-span marginal
/// widths along the diagonal of each photon's plane. Both fields are
/// normalized to unit discrete L2 norm first.
inline double paraxial_reduction_distance(const ExperimentConfig& config,
                                          const PhaseMatchingInputs& in,
                                          int grid_points_per_axis = 21,
                                          double span = 2.5) {
    if (grid_points_per_axis < 2)
        throw invalid_config("paraxial_reduction_distance requires at least a 2x2 grid");
    const auto coeffs = derive_biphoton_coeffs(config);
    const double sigma_x = std::sqrt(1 / coeffs.A + 1 / coeffs.B) / 2;
    const double sigma_y = std::sqrt(1 / coeffs.C + 1 / coeffs.D) / 2;

    const int n = grid_points_per_axis;
    std::vector<double> closed(n * n), full(n * n);
    for (int i = 0; i < n; ++i) {
        const double ti = -span + 2 * span * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double tj = -span + 2 * span * j / (n - 1);
            const TransverseWavevector qs{ti * sigma_x, ti * sigma_y};
            const TransverseWavevector qas{tj * sigma_x, tj * sigma_y};
            closed[i * n + j] = eval_closed_form(coeffs, qs, qas).re;
            full[i * n + j] = eval_full_integral(config, in, qs, qas).re;
        }
    }

    double nc = 0, nf = 0;
    for (int k = 0; k < n * n; ++k) {
        nc += closed[k] * closed[k];
        nf += full[k] * full[k];
    }
    nc = std::sqrt(nc);
    nf = std::sqrt(nf);
    double dist = 0;
    for (int k = 0; k < n * n; ++k) {
        const double d = closed[k] / nc - full[k] / nf;
        dist += d * d;
    }
    return std::sqrt(dist);
}

} // namespace biphoton
