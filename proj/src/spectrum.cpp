#include "subsql/spectrum.hpp"

#include <cmath>
#include <stdexcept>

namespace subsql {

Spectrum Spectrum::amplitude() const {
    Spectrum a = *this;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 0.0)
            throw std::domain_error("amplitude undefined: spectrum has negative bins");
        a.values[i] = std::sqrt(values[i]);
    }
    return a;
}

void Spectrum::require_same_grid(const Spectrum& other) const {
    if (!(grid == other.grid))
        throw std::invalid_argument("spectra live on different frequency grids");
}

void Spectrum::validate() const {
    if (grid.size() != values.size())
        throw std::invalid_argument("spectrum grid/value size mismatch");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("spectrum value not finite");
}

std::pair<std::size_t, std::size_t> band_indices(const FrequencyGrid& g, double f_lo_hz,
                                                 double f_hi_hz) {
    std::size_t first = g.size(), last = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] >= f_lo_hz && g[i] <= f_hi_hz) {
            if (first == g.size()) first = i;
            last = i;
        }
    }
    if (first == g.size())
        throw std::invalid_argument("frequency band contains no grid points");
    return {first, last};
}

double band_mean(const Spectrum& s, double f_lo_hz, double f_hi_hz) {
    auto [first, last] = band_indices(s.grid, f_lo_hz, f_hi_hz);
    double acc = 0.0;
    for (std::size_t i = first; i <= last; ++i) acc += s.values[i];
    return acc / static_cast<double>(last - first + 1);
}

}  // namespace subsql
