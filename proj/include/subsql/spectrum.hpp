#pragma once

#include <string>
#include <vector>

#include "subsql/grid.hpp"

namespace subsql {

// A one-sided spectrum on a frequency grid. `values` is a PSD (m^2/Hz) for
// displacement spectra or dimensionless for ratios. Model spectra are strictly
// positive; inferred (noise-subtracted) spectra may carry negative bins, which
// are preserved and flagged by the producer rather than clipped.
struct Spectrum {
    FrequencyGrid grid;
    std::vector<double> values;
    double bin_width_hz = 0.0;   // 0 when not a binned estimate
    int segment_count = 0;       // averaged segments behind an estimate
    double duration_s = 0.0;     // total data seconds behind an estimate
    std::string label;

    std::size_t size() const { return values.size(); }

    // sqrt per bin (amplitude spectral density, m/sqrt(Hz)).
    // Throws std::domain_error if any bin is negative.
    Spectrum amplitude() const;

    // Throws std::invalid_argument unless `other` shares this grid exactly.
    void require_same_grid(const Spectrum& other) const;

    // Throws std::invalid_argument on grid/value size mismatch or non-finite values.
    void validate() const;
};

// Mean of values over [f_lo, f_hi] inclusive. Throws std::invalid_argument
// when the band contains no grid point.
double band_mean(const Spectrum& s, double f_lo_hz, double f_hi_hz);

// Index range [first, last] of grid points inside [f_lo, f_hi].
std::pair<std::size_t, std::size_t> band_indices(const FrequencyGrid& g, double f_lo_hz,
                                                 double f_hi_hz);

}  // namespace subsql
