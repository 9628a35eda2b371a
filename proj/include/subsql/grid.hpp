#pragma once

#include <cstddef>
#include <vector>

namespace subsql {

// Strictly increasing, strictly positive frequencies in Hz. Zero is excluded
// because the optomechanical kernels diverge there.
class FrequencyGrid {
public:
    FrequencyGrid() = default;
    explicit FrequencyGrid(std::vector<double> f_hz);  // validates

    // n points from f_lo to f_hi inclusive (n >= 2).
    static FrequencyGrid linear(double f_lo_hz, double f_hi_hz, std::size_t n);
    // Uniform bins k_lo*df .. k_hi*df (k_lo >= 1).
    static FrequencyGrid uniform_bins(double df_hz, std::size_t k_lo, std::size_t k_hi);

    const std::vector<double>& hz() const { return f_; }
    std::size_t size() const { return f_.size(); }
    double operator[](std::size_t i) const { return f_[i]; }
    bool empty() const { return f_.empty(); }

    bool operator==(const FrequencyGrid& other) const { return f_ == other.f_; }

    std::vector<double>::const_iterator begin() const { return f_.begin(); }
    std::vector<double>::const_iterator end() const { return f_.end(); }

private:
    std::vector<double> f_;
};

}  // namespace subsql
