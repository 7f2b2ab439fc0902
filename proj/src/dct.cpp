#include "sylkit/dct.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "sylkit/errors.hpp"

namespace sylkit::sketch {

namespace {
// FFTW's planner is not thread-safe; execution with new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : p(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (!p) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(p); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* p;
};
}  // namespace

DctPlan::DctPlan(std::size_t n) : n_(n), twiddle_(n) {
  if (n == 0) throw DimensionMismatch("DctPlan: length must be positive");
  const std::size_t m = 2 * n;
  {
    FftwBuffer in(m), out(m);
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(m), in.p, out.p, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  if (!plan_) throw Error(ErrorCode::InvalidConfig, "FFTW could not plan length " + std::to_string(m));
  const double c0 = std::sqrt(1.0 / static_cast<double>(n));
  const double ck = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const double ang = -std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
    twiddle_[k] = 0.5 * (k == 0 ? c0 : ck) * std::complex<double>(std::cos(ang), std::sin(ang));
  }
}

DctPlan::~DctPlan() {
  if (plan_) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
}

void DctPlan::forward(const double* in, double* out) const {
  const std::size_t n = n_, m = 2 * n;
  FftwBuffer a(m), b(m);
  for (std::size_t j = 0; j < n; ++j) {
    a.p[j][0] = in[j];
    a.p[j][1] = 0.0;
    a.p[m - 1 - j][0] = in[j];
    a.p[m - 1 - j][1] = 0.0;
  }
  fftw_execute_dft(static_cast<fftw_plan>(plan_), a.p, b.p);
  for (std::size_t k = 0; k < n; ++k) {
    const std::complex<double> y(b.p[k][0], b.p[k][1]);
    out[k] = (twiddle_[k] * y).real();
  }
}

}  // namespace sylkit::sketch
