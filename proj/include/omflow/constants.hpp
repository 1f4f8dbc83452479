#pragma once

// =============================================================================
// omflow - physical constants and unit conventions
// =============================================================================
// All model rates (damping, coupling strengths, detunings, frequencies fed to
// the dynamics) are dimensionless, measured in units of a reference rate
// kappa_ref.  SI units appear in exactly two places: thermal_occupation()
// (absolute mode frequency in rad/s, temperature in K) and the JSON config
// layer, which fixes kappa_ref via "reference_rate_hz".
// =============================================================================

#include <cmath>

namespace omflow {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

/// Reduced Planck constant [J s] (2019 SI).
inline constexpr double hbar = 1.054571817e-34;

/// Boltzmann constant [J/K] (2019 SI, exact).
inline constexpr double k_boltzmann = 1.380649e-23;

/// Default reference rate [Hz]: kappa_ref = 2*pi * 1 MHz.
inline constexpr double default_reference_rate_hz = 1.0e6;

/// Wraps an angle into [0, 2*pi).
[[nodiscard]] inline double wrap_angle(double phi) {
    double w = std::fmod(phi, two_pi);
    if (w < 0.0) w += two_pi;
    // fmod can return exactly two_pi after the correction when phi is a tiny
    // negative number; fold that back to zero.
    if (w >= two_pi) w = 0.0;
    return w;
}

}  // namespace omflow
