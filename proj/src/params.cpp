#include "subsql/params.hpp"

#include <cmath>
#include <stdexcept>

namespace subsql {

void InterferometerParams::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(arm_power_w)) throw std::invalid_argument("arm power must be > 0");
    if (!positive(mirror_mass_kg)) throw std::invalid_argument("mirror mass must be > 0");
    if (!positive(arm_length_m)) throw std::invalid_argument("arm length must be > 0");
    if (!positive(bandwidth_rad_s)) throw std::invalid_argument("cavity bandwidth must be > 0");
    if (!positive(wavelength_m)) throw std::invalid_argument("wavelength must be > 0");
    auto efficiency = [](double v) { return std::isfinite(v) && v > 0.0 && v <= 1.0; };
    if (!efficiency(input_efficiency))
        throw std::invalid_argument("input efficiency must lie in (0, 1]");
    if (!efficiency(output_efficiency))
        throw std::invalid_argument("output efficiency must lie in (0, 1]");
    if ((1.0 - input_efficiency) + (1.0 - output_efficiency) >= 1.0)
        throw std::invalid_argument("combined losses must stay below unity");
    if (!std::isfinite(src_detuning_rad) || !std::isfinite(src_rotation_per_detuning))
        throw std::invalid_argument("recycling-cavity detuning must be finite");
    if (std::abs(src_rotation_rad()) >= constants::pi / 2.0)
        throw std::invalid_argument("detuning rotation must stay below pi/2");
}

double SqueezerParams::r_from_db(double db) {
    // e^{-2r} = 10^{-db/10}  =>  r = db * ln(10) / 20.
    return db * std::log(10.0) / 20.0;
}

double SqueezerParams::squeeze_db() const { return 20.0 * r / std::log(10.0); }

SqueezerParams SqueezerParams::from_db(double db, double angle_rad) {
    SqueezerParams sq{r_from_db(db), angle_rad};
    sq.validate();
    return sq;
}

double SqueezerParams::normalized_angle() const {
    double a = std::fmod(angle_rad, constants::pi);
    if (a <= -constants::pi / 2.0) a += constants::pi;
    if (a > constants::pi / 2.0) a -= constants::pi;
    return a;
}

void SqueezerParams::validate() const {
    if (!std::isfinite(r) || r < 0.0) throw std::invalid_argument("squeeze parameter r must be >= 0");
    if (r > 20.0) throw std::invalid_argument("squeeze parameter r > 20 is unphysical");
    if (!std::isfinite(angle_rad)) throw std::invalid_argument("squeeze angle must be finite");
}

}  // namespace subsql
