#include "subsql/qnoise.hpp"

#include <cmath>
#include <stdexcept>

#include "subsql/constants.hpp"
#include "subsql/core_physics.hpp"
#include "subsql/errors.hpp"
#include "subsql/threads.hpp"

namespace subsql {

namespace {

// Shared prefactor hbar c / (8 k |G|^2 P), the shot-only displacement PSD of
// the ideal readout.
double shot_prefactor(const InterferometerParams& p, double f_hz) {
    return constants::hbar * constants::speed_of_light /
           (8.0 * p.wavenumber() * sensing_gain2(p, f_hz) * p.arm_power_w);
}

template <typename F>
Spectrum spectrum_over(const FrequencyGrid& g, const std::string& label, F&& f) {
    Spectrum s;
    s.grid = g;
    s.values.reserve(g.size());
    for (double fr : g) s.values.push_back(f(fr));
    s.label = label;
    return s;
}

}  // namespace

double squeezing_factor(double r, double phi_rad, double theta_rad) {
    const double d = phi_rad - theta_rad;
    const double c = std::cos(d), s = std::sin(d);
    return std::exp(-2.0 * r) * c * c + std::exp(2.0 * r) * s * s;
}

double lossy_squeezing_factor(double r, double phi_rad, double theta_rad, double eta_e) {
    return eta_e * squeezing_factor(r, phi_rad, theta_rad) + (1.0 - eta_e);
}

double sql_psd(const InterferometerParams& p, double f_hz) {
    const double om = 2.0 * constants::pi * f_hz;
    if (!(f_hz > 0.0)) throw std::domain_error("frequency must be > 0 Hz");
    return 8.0 * constants::hbar / (p.mirror_mass_kg * om * om);
}

Spectrum sql_psd(const InterferometerParams& p, const FrequencyGrid& g) {
    return spectrum_over(g, "sql", [&](double f) { return sql_psd(p, f); });
}

double ideal_displacement_psd(const InterferometerParams& p, const SqueezerParams& sq,
                              double f_hz) {
    const double k = ponderomotive_gain(p, f_hz);
    const double theta = std::atan(k);
    const double s = squeezing_factor(sq.r, sq.normalized_angle(), theta);
    return s * (1.0 + k * k) * shot_prefactor(p, f_hz);
}

Spectrum ideal_displacement_psd(const InterferometerParams& p, const SqueezerParams& sq,
                                const FrequencyGrid& g) {
    return spectrum_over(g, "ideal",
                         [&](double f) { return ideal_displacement_psd(p, sq, f); });
}

double lossy_displacement_psd(const InterferometerParams& p, const SqueezerParams& sq,
                              double f_hz) {
    const double k = ponderomotive_gain(p, f_hz);
    const double theta_star = rotation_angle(p, f_hz, /*include_src=*/true);
    const double eta_e = effective_efficiency(p, f_hz);
    const double s_star =
        lossy_squeezing_factor(sq.r, sq.normalized_angle(), theta_star, eta_e);
    const double eta_o = p.output_efficiency;
    return s_star * (1.0 + eta_o * k * k) * shot_prefactor(p, f_hz) / eta_o;
}

Spectrum lossy_displacement_psd(const InterferometerParams& p, const SqueezerParams& sq,
                                const FrequencyGrid& g) {
    return spectrum_over(g, "lossy",
                         [&](double f) { return lossy_displacement_psd(p, sq, f); });
}

Spectrum lossy_squeezing_spectrum(const InterferometerParams& p, const SqueezerParams& sq,
                                  const FrequencyGrid& g) {
    const double phi = sq.normalized_angle();
    return spectrum_over(g, "s_star", [&](double f) {
        return lossy_squeezing_factor(sq.r, phi, rotation_angle(p, f, true),
                                      effective_efficiency(p, f));
    });
}

NoiseDecomposition decompose(const InterferometerParams& p, const FrequencyGrid& g) {
    NoiseDecomposition d;
    d.shot = spectrum_over(g, "shot", [&](double f) {
        return shot_prefactor(p, f) / p.output_efficiency;
    });
    d.qrpn = spectrum_over(g, "qrpn", [&](double f) {
        const double k = ponderomotive_gain(p, f);
        return k * k * shot_prefactor(p, f);
    });
    d.total = d.shot;
    d.total.label = "total";
    for (std::size_t i = 0; i < g.size(); ++i) d.total.values[i] += d.qrpn.values[i];
    return d;
}

double dip_frequency(const InterferometerParams& p, const SqueezerParams& sq, double f_lo_hz,
                     double f_hi_hz) {
    if (!(f_lo_hz > 0.0) || !(f_hi_hz > f_lo_hz))
        throw std::invalid_argument("dip search needs 0 < f_lo < f_hi");
    const double phi = sq.normalized_angle();
    if (!(phi > 0.0 && phi < constants::pi / 2.0))
        throw no_root_error("readout angle must lie in (0, pi/2) for a rotation crossing");
    auto miss = [&](double f) { return rotation_angle(p, f, true) - phi; };
    double lo = f_lo_hz, hi = f_hi_hz;
    double m_lo = miss(lo), m_hi = miss(hi);
    // theta* falls from near pi/2 toward its high-frequency floor on this band.
    if (m_lo < 0.0 || m_hi > 0.0)
        throw no_root_error("rotation angle does not cross the readout angle on the band");
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        if (miss(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

SqueezingContour squeezing_contour(const InterferometerParams& p, double r,
                                   const std::vector<double>& angles_rad,
                                   const FrequencyGrid& g) {
    SqueezingContour c;
    c.angles_rad = angles_rad;
    c.grid = g;
    c.s_star.assign(angles_rad.size(), {});
    // Rows are independent; precompute the angle-independent kernels once.
    std::vector<double> theta = rotation_angle(p, g, true);
    std::vector<double> eta = effective_efficiency(p, g);
    parallel_for(angles_rad.size(), [&](std::size_t a) {
        SqueezerParams sq{r, angles_rad[a]};
        const double phi = sq.normalized_angle();
        auto& row = c.s_star[a];
        row.resize(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            row[i] = lossy_squeezing_factor(r, phi, theta[i], eta[i]);
    });
    return c;
}

}  // namespace subsql
