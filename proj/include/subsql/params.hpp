#pragma once

#include "subsql/constants.hpp"

namespace subsql {

// Interferometer operating point. Frequencies and detunings are stored in
// radians/s and radians; public entry points that accept frequencies take Hz.
struct InterferometerParams {
    double arm_power_w = 200e3;
    double mirror_mass_kg = 40.0;
    double arm_length_m = 3995.0;
    double bandwidth_rad_s = 2.0 * constants::pi * 450.0;  // signal cavity pole
    double wavelength_m = 1.064e-6;
    double input_efficiency = 1.0 - 0.172;   // squeezer -> interferometer
    double output_efficiency = 1.0 - 0.174;  // interferometer -> readout
    double src_detuning_rad = 15e-3;
    double src_rotation_per_detuning = constants::src_rotation_per_detuning;

    double wavenumber() const { return 2.0 * constants::pi / wavelength_m; }

    // High-frequency quadrature rotation produced by the detuned recycling cavity.
    double src_rotation_rad() const { return src_rotation_per_detuning * src_detuning_rad; }

    // Throws std::invalid_argument when out of domain (non-positive scales,
    // efficiencies outside (0, 1], or combined losses >= 1).
    void validate() const;
};

// Injected squeezed vacuum: squeeze parameter r >= 0 and quadrature angle.
struct SqueezerParams {
    double r = 0.0;
    double angle_rad = 0.0;

    // Power-dB convention: X dB of squeezing means e^{-2r} = 10^{-X/10}.
    static double r_from_db(double db);
    double squeeze_db() const;
    static SqueezerParams from_db(double db, double angle_rad);

    // The squeezing factor is pi-periodic in the angle; the canonical
    // representative lies in (-pi/2, pi/2].
    double normalized_angle() const;

    // Throws std::invalid_argument for r < 0, absurd r (> 20), or non-finite angle.
    void validate() const;
};

}  // namespace subsql
