#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <vector>

#include <fftw3.h>

#include <decolab/errors.hpp>

namespace decolab {

// One-dimensional real FFT plan pair (r2c forward, c2r inverse), executed
// through the new-array interface so a single plan serves every row. Plans
// use FFTW_ESTIMATE: measured plans pick algorithms by timing, which would
// make runs differ bit-for-bit between invocations. FFTW_UNALIGNED because
// execution arrays live in std::vector storage. Transforms are unnormalized;
// callers fold the 1/n into their multipliers. The inverse destroys its
// complex input.
class RealFftPlan {
  public:
    explicit RealFftPlan(int n) : n_(n) {
        std::vector<double> r(static_cast<size_t>(n));
        std::vector<std::complex<double>> c(static_cast<size_t>(n) / 2 + 1);
        unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fwd_ = fftw_plan_dft_r2c_1d(n, r.data(), reinterpret_cast<fftw_complex*>(c.data()),
                                    flags);
        inv_ = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(c.data()), r.data(),
                                    flags);
        if (!fwd_ || !inv_) throw numerical_error("fft: planning failed");
    }
    RealFftPlan(const RealFftPlan&) = delete;
    RealFftPlan& operator=(const RealFftPlan&) = delete;
    ~RealFftPlan() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(inv_);
    }

    int size() const { return n_; }
    int bins() const { return n_ / 2 + 1; }

    void forward(const double* in, std::complex<double>* out) const {
        fftw_execute_dft_r2c(fwd_, const_cast<double*>(in),
                             reinterpret_cast<fftw_complex*>(out));
    }
    void inverse(std::complex<double>* in, double* out) const {
        fftw_execute_dft_c2r(inv_, reinterpret_cast<fftw_complex*>(in), out);
    }

  private:
    int n_;
    fftw_plan fwd_;
    fftw_plan inv_;
};

// Cache-blocked out-of-place transpose: dst[c*rows + r] = src[r*cols + c].
inline void transpose(const double* src, double* dst, int rows, int cols) {
    constexpr int block = 64;
    for (int rb = 0; rb < rows; rb += block)
        for (int cb = 0; cb < cols; cb += block) {
            int rlim = std::min(rows, rb + block);
            int clim = std::min(cols, cb + block);
            for (int r = rb; r < rlim; ++r)
                for (int c = cb; c < clim; ++c)
                    dst[static_cast<size_t>(c) * rows + r] =
                        src[static_cast<size_t>(r) * cols + c];
        }
}

}  // namespace decolab
