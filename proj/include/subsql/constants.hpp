#pragma once

namespace subsql::constants {

inline constexpr double hbar = 1.054571817e-34;    // J s
inline constexpr double speed_of_light = 2.99792458e8;  // m/s
inline constexpr double pi = 3.141592653589793238462643383279502884;

// Scaled-median PSD estimation: the per-bin periodogram of Gaussian noise is
// exponential, whose median is ln 2 of its mean, so the bin-wise median is
// multiplied by 1/ln 2 to estimate the mean PSD.
inline constexpr double median_to_mean = 1.4426950408889634;  // 1/ln 2

// Signal-recycling cavity detuning maps to a high-frequency quadrature
// rotation psi = src_rotation_per_detuning * detuning (both in radians).
inline constexpr double src_rotation_per_detuning = 10.7;

}  // namespace subsql::constants
