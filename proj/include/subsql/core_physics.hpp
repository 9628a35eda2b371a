#pragma once

#include <complex>
#include <vector>

#include "subsql/grid.hpp"
#include "subsql/params.hpp"

namespace subsql {

// Optomechanical transfer kernels of the arm-cavity + test-mass system.
// All frequency arguments are Hz and must be > 0 (std::domain_error otherwise).

// Single-pole sensing response G(f) = sqrt(gamma*c/(2L)) / (gamma + i*2*pi*f).
std::complex<double> sensing_response(const InterferometerParams& p, double f_hz);

// |G(f)|^2 = (gamma*c/(2L)) / (gamma^2 + (2*pi*f)^2).
double sensing_gain2(const InterferometerParams& p, double f_hz);

// Ponderomotive gain K(f) = 32 k |G|^2 P / (m (2*pi*f)^2 c): the strength of
// the radiation-pressure coupling between field amplitude and mirror motion.
double ponderomotive_gain(const InterferometerParams& p, double f_hz);

// Quadrature rotation angle of the quantum noise ellipse. With include_src the
// detuned recycling cavity adds psi * (2*pi*f)^2 / (gamma^2 + (2*pi*f)^2).
double rotation_angle(const InterferometerParams& p, double f_hz, bool include_src);

// Effective efficiency folding injection and readout losses with the
// ponderomotive suppression of readout loss:
//   1 - eta_e = (1 - eta_i) + (1 - eta_o) / (1 + K^2).
double effective_efficiency(const InterferometerParams& p, double f_hz);

// Grid-vectorized forms.
std::vector<double> sensing_gain2(const InterferometerParams& p, const FrequencyGrid& g);
std::vector<double> ponderomotive_gain(const InterferometerParams& p, const FrequencyGrid& g);
std::vector<double> rotation_angle(const InterferometerParams& p, const FrequencyGrid& g,
                                   bool include_src);
std::vector<double> effective_efficiency(const InterferometerParams& p, const FrequencyGrid& g);

}  // namespace subsql
