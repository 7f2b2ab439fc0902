#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace sylkit::sketch {

/// Orthonormal DCT-II of exact length n, evaluated through a complex FFT of
/// length 2n on the even extension of the input. Plans are created with
/// FFTW_ESTIMATE so the arithmetic is identical from run to run.
class DctPlan {
 public:
  explicit DctPlan(std::size_t n);
  ~DctPlan();
  DctPlan(const DctPlan&) = delete;
  DctPlan& operator=(const DctPlan&) = delete;

  std::size_t size() const noexcept { return n_; }

  /// out[k] = c_k sum_j in[j] cos(pi k (2j+1) / (2n)), c_0 = sqrt(1/n),
  /// c_k = sqrt(2/n). Reentrant: each call uses its own work buffer.
  void forward(const double* in, double* out) const;

 private:
  std::size_t n_;
  void* plan_ = nullptr;  // fftw_plan
  std::vector<std::complex<double>> twiddle_;
};

}  // namespace sylkit::sketch
