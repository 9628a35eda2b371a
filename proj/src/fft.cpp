#include "subsql/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <stdexcept>

namespace subsql {

struct RealFft::Impl {
    double* real = nullptr;
    fftw_complex* cplx = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
};

RealFft::RealFft(std::size_t n) : impl_(new Impl), n_(n) {
    if (n < 2) throw std::invalid_argument("FFT length must be >= 2");
    impl_->real = fftw_alloc_real(n);
    impl_->cplx = fftw_alloc_complex(n / 2 + 1);
    if (!impl_->real || !impl_->cplx) throw std::bad_alloc();
    impl_->fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), impl_->real, impl_->cplx,
                                      FFTW_ESTIMATE);
    impl_->inv = fftw_plan_dft_c2r_1d(static_cast<int>(n), impl_->cplx, impl_->real,
                                      FFTW_ESTIMATE);
}

RealFft::~RealFft() {
    fftw_destroy_plan(impl_->fwd);
    fftw_destroy_plan(impl_->inv);
    fftw_free(impl_->real);
    fftw_free(impl_->cplx);
    delete impl_;
}

void RealFft::forward(const std::vector<double>& in, std::vector<std::complex<double>>& out) {
    if (in.size() != n_) throw std::invalid_argument("FFT input length mismatch");
    std::memcpy(impl_->real, in.data(), n_ * sizeof(double));
    fftw_execute(impl_->fwd);
    out.resize(n_ / 2 + 1);
    // std::complex<double> is layout-compatible with double[2].
    std::memcpy(reinterpret_cast<double*>(out.data()), impl_->cplx,
                (n_ / 2 + 1) * sizeof(fftw_complex));
}

void RealFft::inverse(const std::vector<std::complex<double>>& in, std::vector<double>& out) {
    if (in.size() != n_ / 2 + 1) throw std::invalid_argument("FFT spectrum length mismatch");
    std::memcpy(impl_->cplx, reinterpret_cast<const double*>(in.data()),
                (n_ / 2 + 1) * sizeof(fftw_complex));
    fftw_execute(impl_->inv);
    out.resize(n_);
    std::memcpy(out.data(), impl_->real, n_ * sizeof(double));
}

}  // namespace subsql
