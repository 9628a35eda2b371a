#include "subsql/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace subsql {

FrequencyGrid::FrequencyGrid(std::vector<double> f_hz) : f_(std::move(f_hz)) {
    if (f_.empty()) throw std::invalid_argument("frequency grid must not be empty");
    double prev = 0.0;
    for (double f : f_) {
        if (!std::isfinite(f) || f <= 0.0)
            throw std::invalid_argument("frequency grid entries must be finite and > 0");
        if (f <= prev) throw std::invalid_argument("frequency grid must be strictly increasing");
        prev = f;
    }
}

FrequencyGrid FrequencyGrid::linear(double f_lo_hz, double f_hi_hz, std::size_t n) {
    if (n < 2) throw std::invalid_argument("linear grid needs at least 2 points");
    if (!(f_lo_hz > 0.0) || !(f_hi_hz > f_lo_hz))
        throw std::invalid_argument("linear grid needs 0 < f_lo < f_hi");
    std::vector<double> f(n);
    const double step = (f_hi_hz - f_lo_hz) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) f[i] = f_lo_hz + step * static_cast<double>(i);
    f.back() = f_hi_hz;
    return FrequencyGrid(std::move(f));
}

FrequencyGrid FrequencyGrid::uniform_bins(double df_hz, std::size_t k_lo, std::size_t k_hi) {
    if (!(df_hz > 0.0)) throw std::invalid_argument("bin width must be > 0");
    if (k_lo < 1 || k_hi < k_lo) throw std::invalid_argument("bin range needs 1 <= k_lo <= k_hi");
    std::vector<double> f;
    f.reserve(k_hi - k_lo + 1);
    for (std::size_t k = k_lo; k <= k_hi; ++k) f.push_back(df_hz * static_cast<double>(k));
    return FrequencyGrid(std::move(f));
}

}  // namespace subsql
