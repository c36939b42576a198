#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "biphoton/errors.hpp"

// Geometry of the pair source: the interaction volume (cold-atom cloud),
// the pump/control beams, the detection filters, and the emission angle.
// All lengths are micrometres, all transverse wavenumbers rad/um, all
// angles radians. The CLI converts degrees/mm at the boundary.

namespace biphoton {

inline constexpr double speed_of_light_um_s = 2.99792458e14; // um/s

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Full geometric/optical parameter set of one source configuration.
struct ExperimentConfig {
    double cloud_transverse_size = 0;  // R, um
    double cloud_length = 0;           // L, um
    double pump_waist = 0;             // w0, um
    double detection_filter_width = 0; // w1, um
    double herald_mode_waist = 0;      // wg, um
    double emission_angle = 0;         // phi, rad, in [0, pi/2]
    double pump_wavelength = 0.780;    // lambda_p, um
    double refractive_index = 1.0;     // n_p at the pump wavelength

    /// Throws invalid_config naming the violated invariant.
    void validate() const;
};

/// The four Gaussian widths of the two-photon amplitude, in um^2.
/// A multiplies (q_s^x+q_as^x)^2/4, B the x-difference, C the
/// y-difference and D the y-sum quadratic form.
struct BiphotonCoefficients {
    double A = 0; // um^2
    double B = 0; // um^2
    double C = 0; // um^2
    double D = 0; // um^2

    void validate() const;
};

/// Gaussian widths of the heralded Stokes mode after projecting the
/// anti-Stokes photon on a Gaussian of waist wg. F acts on q_s^x, G on q_s^y.
struct HeraldedCoefficients {
    double F = 0; // um^2
    double G = 0; // um^2

    void validate() const;
};

/// Central frequencies, wavenumbers and emission angles entering the
/// phase-matching relations.
struct PhaseMatchingInputs {
    double omega_p = 0;  // rad/s
    double omega_c = 0;  // rad/s
    double omega_s = 0;  // rad/s
    double omega_as = 0; // rad/s
    double k_p = 0;      // rad/um
    double k_c = 0;      // rad/um
    double k_s = 0;      // rad/um
    double k_as = 0;     // rad/um
    double phi_s = 0;    // rad
    double phi_as = 0;   // rad

    void validate() const;

    /// Degenerate inputs for a given geometry: pump and control share one
    /// frequency, Stokes/anti-Stokes sit at the same line centre, and the
    /// anti-Stokes angle is pi - phi. The GHz-scale hyperfine splitting is
    /// negligible against the optical frequency and is dropped.
    static PhaseMatchingInputs degenerate(const ExperimentConfig& config);
};

/// Signed residuals of the three phase-matching relations: energy,
/// longitudinal wavevector, transverse wavevector.
struct PhaseMatchingResiduals {
    double energy = 0;       // rad/s
    double longitudinal = 0; // rad/um
    double transverse = 0;   // rad/um
};

inline void ExperimentConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0) || !std::isfinite(v))
            throw invalid_config(std::string(name) + " must be positive and finite");
    };
    positive(cloud_transverse_size, "cloud_transverse_size (R)");
    positive(cloud_length, "cloud_length (L)");
    positive(pump_waist, "pump_waist (w0)");
    positive(detection_filter_width, "detection_filter_width (w1)");
    positive(herald_mode_waist, "herald_mode_waist (wg)");
    positive(pump_wavelength, "pump_wavelength (lambda_p)");
    if (!std::isfinite(emission_angle) || emission_angle < 0 || emission_angle > std::numbers::pi / 2 + 1e-12)
        throw invalid_config("emission_angle (phi) must lie in [0, pi/2]");
    if (!(refractive_index >= 1.0) || !std::isfinite(refractive_index))
        throw invalid_config("refractive_index (n_p) must be >= 1");
}

inline void BiphotonCoefficients::validate() const {
    if (!(A > 0) || !(B > 0) || !(C > 0) || !(D > 0) ||
        !std::isfinite(A) || !std::isfinite(B) || !std::isfinite(C) || !std::isfinite(D))
        throw invalid_config("biphoton coefficients A, B, C, D must all be positive and finite");
}

inline void HeraldedCoefficients::validate() const {
    if (!(F > 0) || !(G > 0) || !std::isfinite(F) || !std::isfinite(G))
        throw invalid_config("heralded coefficients F, G must be positive and finite");
}

inline void PhaseMatchingInputs::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0) || !std::isfinite(v))
            throw invalid_config(std::string(name) + " must be positive and finite");
    };
    positive(omega_p, "omega_p");
    positive(omega_c, "omega_c");
    positive(omega_s, "omega_s");
    positive(omega_as, "omega_as");
    positive(k_p, "k_p");
    positive(k_c, "k_c");
    positive(k_s, "k_s");
    positive(k_as, "k_as");
    if (!std::isfinite(phi_s) || !std::isfinite(phi_as))
        throw invalid_config("emission angles must be finite");
}

/// Gaussian widths of the two-photon amplitude for a given geometry.
/// The pump-cloud term w0^2 R^2/(2R^2+w0^2) feeds A and (with cos^2 phi)
/// D; the cloud length enters D as L^2 sin^2 phi; the detection filter
/// adds w1^2/2 everywhere, and is the only content of B and C.
inline BiphotonCoefficients derive_biphoton_coeffs(const ExperimentConfig& config) {
    config.validate();
    const double w0 = config.pump_waist;
    const double R = config.cloud_transverse_size;
    const double w1 = config.detection_filter_width;
    const double L = config.cloud_length;
    const double phi = config.emission_angle;

    const double pump_cloud = w0 * w0 * R * R / (2 * R * R + w0 * w0);
    const double filter = w1 * w1 / 2;
    const double c = std::cos(phi);
    const double s = std::sin(phi);

    BiphotonCoefficients coeffs;
    coeffs.A = pump_cloud + filter;
    coeffs.B = filter;
    coeffs.C = filter;
    coeffs.D = pump_cloud * c * c + L * L * s * s + filter;
    return coeffs;
}

/// Widths of the Stokes mode heralded by projecting the anti-Stokes
/// photon on a Gaussian of waist herald_mode_waist.
inline HeraldedCoefficients derive_heralded_coeffs(const BiphotonCoefficients& coeffs,
                                                   double herald_mode_waist) {
    coeffs.validate();
    if (!(herald_mode_waist > 0) || !std::isfinite(herald_mode_waist))
        throw invalid_config("herald_mode_waist (wg) must be positive and finite");
    const double wg2 = herald_mode_waist * herald_mode_waist;
    HeraldedCoefficients h;
    h.F = (4 * coeffs.A * coeffs.B + (coeffs.A + coeffs.B) * wg2) / (coeffs.A + coeffs.B + wg2);
    h.G = (4 * coeffs.C * coeffs.D + (coeffs.C + coeffs.D) * wg2) / (coeffs.C + coeffs.D + wg2);
    return h;
}

/// Cloud length L* = R / sqrt(1 + 2R^2/w0^2) at which A = D for every
/// emission angle, i.e. the mode function is cylindrically symmetric and
/// all emission directions are quantum-identical. Always < R; tends to R
/// for w0 >> R.
inline double symmetric_cloud_length(double cloud_transverse_size, double pump_waist) {
    if (!(cloud_transverse_size > 0) || !(pump_waist > 0) ||
        !std::isfinite(cloud_transverse_size) || !std::isfinite(pump_waist))
        throw invalid_config("symmetric_cloud_length requires positive finite R and w0");
    const double R = cloud_transverse_size;
    const double w0 = pump_waist;
    return R / std::sqrt(1 + 2 * R * R / (w0 * w0));
}

/// Residuals of energy conservation and of the longitudinal/transverse
/// central phase-matching relations. All three vanish for the degenerate
/// transverse configuration (equal frequencies, phi_s = phi_as = pi/2).
inline PhaseMatchingResiduals check_phase_matching(const PhaseMatchingInputs& in) {
    in.validate();
    PhaseMatchingResiduals r;
    r.energy = in.omega_p + in.omega_c - in.omega_s - in.omega_as;
    r.longitudinal = in.k_p - in.k_c - in.k_s * std::cos(in.phi_s) + in.k_as * std::cos(in.phi_as);
    r.transverse = in.k_s * std::sin(in.phi_s) - in.k_as * std::sin(in.phi_as);
    return r;
}

inline PhaseMatchingInputs PhaseMatchingInputs::degenerate(const ExperimentConfig& config) {
    config.validate();
    PhaseMatchingInputs in;
    const double omega = 2 * std::numbers::pi * speed_of_light_um_s / config.pump_wavelength;
    in.omega_p = in.omega_c = in.omega_s = in.omega_as = omega;
    in.k_p = in.k_c = 2 * std::numbers::pi * config.refractive_index / config.pump_wavelength;
    // The scattered photons leave the dilute cloud into vacuum.
    in.k_s = in.k_as = 2 * std::numbers::pi / config.pump_wavelength;
    in.phi_s = config.emission_angle;
    in.phi_as = std::numbers::pi - config.emission_angle;
    return in;
}

} // namespace biphoton
