#pragma once

#include <vector>

#include "subsql/grid.hpp"
#include "subsql/params.hpp"
#include "subsql/spectrum.hpp"

namespace subsql {

// Quadrature-dependent squeezing factor at readout angle phi for a noise
// ellipse rotated to theta: S = e^{-2r} cos^2(phi-theta) + e^{2r} sin^2(phi-theta).
double squeezing_factor(double r, double phi_rad, double theta_rad);

// Loss-degraded factor: S* = eta_e * S + (1 - eta_e).
double lossy_squeezing_factor(double r, double phi_rad, double theta_rad, double eta_e);

// Standard quantum limit PSD: 8 hbar / (m (2*pi*f)^2), in m^2/Hz.
Spectrum sql_psd(const InterferometerParams& p, const FrequencyGrid& g);
double sql_psd(const InterferometerParams& p, double f_hz);

// Ideal (lossless, undetuned) displacement noise PSD:
//   S(theta) * (1 + K^2) * hbar c / (8 k |G|^2 P),  theta = atan(K).
Spectrum ideal_displacement_psd(const InterferometerParams& p, const SqueezerParams& sq,
                                const FrequencyGrid& g);
double ideal_displacement_psd(const InterferometerParams& p, const SqueezerParams& sq,
                              double f_hz);

// Loss- and detuning-augmented displacement noise PSD:
//   S*(theta*) * (1 + eta_o K^2) * hbar c / (eta_o 8 k |G|^2 P).
Spectrum lossy_displacement_psd(const InterferometerParams& p, const SqueezerParams& sq,
                                const FrequencyGrid& g);
double lossy_displacement_psd(const InterferometerParams& p, const SqueezerParams& sq,
                              double f_hz);

// Dimensionless S*(f) at readout angle sq.angle_rad (detuning included).
Spectrum lossy_squeezing_spectrum(const InterferometerParams& p, const SqueezerParams& sq,
                                  const FrequencyGrid& g);

// Shot/radiation-pressure split of the unsqueezed lossy model; total is the
// exact bin-wise sum of the parts.
struct NoiseDecomposition {
    Spectrum total;
    Spectrum shot;
    Spectrum qrpn;
};
NoiseDecomposition decompose(const InterferometerParams& p, const FrequencyGrid& g);

// Frequency where the rotated noise ellipse aligns with the readout angle,
// i.e. the root of theta*(f) = normalized angle, found by bisection to 1e-6 Hz
// on [f_lo, f_hi]. The band must bracket the root (no_root_error otherwise) and
// theta* must be monotone on it, which holds on the default band for small
// detunings. At the returned frequency S*(f) attains its minimum over f for
// the fixed angle (up to the slow frequency drift of eta_e).
double dip_frequency(const InterferometerParams& p, const SqueezerParams& sq,
                     double f_lo_hz = 1.0, double f_hi_hz = 200.0);

// S*(f, phi) for a list of readout angles at fixed squeeze level.
struct SqueezingContour {
    std::vector<double> angles_rad;
    FrequencyGrid grid;
    std::vector<std::vector<double>> s_star;  // [angle][bin]
};
SqueezingContour squeezing_contour(const InterferometerParams& p, double r,
                                   const std::vector<double>& angles_rad,
                                   const FrequencyGrid& g);

}  // namespace subsql
