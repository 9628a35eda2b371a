#include "subsql/core_physics.hpp"

#include <cmath>
#include <stdexcept>

#include "subsql/constants.hpp"

namespace subsql {

namespace {

double angular(double f_hz) {
    if (!std::isfinite(f_hz) || f_hz <= 0.0)
        throw std::domain_error("frequency must be finite and > 0 Hz");
    return 2.0 * constants::pi * f_hz;
}

template <typename F>
std::vector<double> over_grid(const FrequencyGrid& g, F&& f) {
    std::vector<double> out;
    out.reserve(g.size());
    for (double fr : g) out.push_back(f(fr));
    return out;
}

}  // namespace

std::complex<double> sensing_response(const InterferometerParams& p, double f_hz) {
    const double om = angular(f_hz);
    const double num =
        std::sqrt(p.bandwidth_rad_s * constants::speed_of_light / (2.0 * p.arm_length_m));
    return num / std::complex<double>(p.bandwidth_rad_s, om);
}

double sensing_gain2(const InterferometerParams& p, double f_hz) {
    const double om = angular(f_hz);
    const double g = p.bandwidth_rad_s;
    return (g * constants::speed_of_light / (2.0 * p.arm_length_m)) / (g * g + om * om);
}

double ponderomotive_gain(const InterferometerParams& p, double f_hz) {
    const double om = angular(f_hz);
    return 32.0 * p.wavenumber() * sensing_gain2(p, f_hz) * p.arm_power_w /
           (p.mirror_mass_kg * om * om * constants::speed_of_light);
}

double rotation_angle(const InterferometerParams& p, double f_hz, bool include_src) {
    const double om = angular(f_hz);
    double theta = std::atan(ponderomotive_gain(p, f_hz));
    if (include_src) {
        const double g = p.bandwidth_rad_s;
        theta += p.src_rotation_rad() * om * om / (g * g + om * om);
    }
    return theta;
}

double effective_efficiency(const InterferometerParams& p, double f_hz) {
    const double k = ponderomotive_gain(p, f_hz);
    const double loss =
        (1.0 - p.input_efficiency) + (1.0 - p.output_efficiency) / (1.0 + k * k);
    return 1.0 - loss;
}

std::vector<double> sensing_gain2(const InterferometerParams& p, const FrequencyGrid& g) {
    return over_grid(g, [&](double f) { return sensing_gain2(p, f); });
}

std::vector<double> ponderomotive_gain(const InterferometerParams& p, const FrequencyGrid& g) {
    return over_grid(g, [&](double f) { return ponderomotive_gain(p, f); });
}

std::vector<double> rotation_angle(const InterferometerParams& p, const FrequencyGrid& g,
                                   bool include_src) {
    return over_grid(g, [&](double f) { return rotation_angle(p, f, include_src); });
}

std::vector<double> effective_efficiency(const InterferometerParams& p, const FrequencyGrid& g) {
    return over_grid(g, [&](double f) { return effective_efficiency(p, f); });
}

}  // namespace subsql
