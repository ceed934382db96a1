#ifndef SST_FFT_HPP
#define SST_FFT_HPP

#include <fftw3.h>

#include <memory>

#include "sst/core.hpp"

namespace sst {

/// In-place complex DFT of a fixed length backed by FFTW. Plans use
/// FFTW_ESTIMATE so results do not depend on run-time measurement.
/// Not thread-safe: FFTW planning is global state.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n) : n_(n), buf_(fftw_alloc_complex(n), &fftw_free) {
    if (n == 0) throw ParameterError("FFT length must be positive");
    auto* p = buf_.get();
    fwd_ = fftw_plan_dft_1d(static_cast<int>(n), p, p, FFTW_FORWARD, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_1d(static_cast<int>(n), p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  ~FftPlan() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
  }

  std::size_t size() const noexcept { return n_; }

  std::span<cplx> buffer() noexcept {
    return {reinterpret_cast<cplx*>(buf_.get()), n_};
  }

  /// X_k = sum_n x_n exp(-2 pi i k n / N)
  void forward() { fftw_execute(fwd_); }

  /// x_n = (1/N) sum_k X_k exp(2 pi i k n / N)
  void inverse() {
    fftw_execute(inv_);
    const double s = 1.0 / static_cast<double>(n_);
    for (auto& v : buffer()) v *= s;
  }

 private:
  std::size_t n_;
  std::unique_ptr<fftw_complex, decltype(&fftw_free)> buf_;
  fftw_plan fwd_ = nullptr;
  fftw_plan inv_ = nullptr;
};

}  // namespace sst

#endif  // SST_FFT_HPP
