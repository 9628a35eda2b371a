#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace subsql {

// Real-to-complex FFT workspace for a fixed transform length. Reuses its plan
// across calls, which matters when thousands of equal-length segments are
// transformed. Not safe for concurrent use of one instance.
class RealFft {
public:
    explicit RealFft(std::size_t n);
    ~RealFft();
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    std::size_t size() const { return n_; }

    // Unnormalized forward transform; out has n/2 + 1 bins.
    void forward(const std::vector<double>& in, std::vector<std::complex<double>>& out);

    // Unnormalized inverse of the one-sided form; callers divide by n.
    void inverse(const std::vector<std::complex<double>>& in, std::vector<double>& out);

private:
    struct Impl;
    Impl* impl_;
    std::size_t n_;
};

}  // namespace subsql
