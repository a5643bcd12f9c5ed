#include "roguewave/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace roguewave {

namespace {

// FFTW's planner is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

int& planner_threads() {
  static int n = 1;
  return n;
}

bool ensure_threads_initialized() {
  static const bool ok = fftw_init_threads() != 0;
  return ok;
}

}  // namespace

struct FftPlan::Impl {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
  std::vector<cplx> scratch;

  Impl(const std::vector<int>& dims_slowest_first, std::size_t n) : scratch(n) {
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    std::lock_guard lock(planner_mutex());
    if (ensure_threads_initialized()) fftw_plan_with_nthreads(planner_threads());
    const int rank = static_cast<int>(dims_slowest_first.size());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fwd = fftw_plan_dft(rank, dims_slowest_first.data(), buf, buf, FFTW_FORWARD, flags);
    inv = fftw_plan_dft(rank, dims_slowest_first.data(), buf, buf, FFTW_BACKWARD, flags);
    if (!fwd || !inv) {
      if (fwd) fftw_destroy_plan(fwd);
      if (inv) fftw_destroy_plan(inv);
      throw std::runtime_error("FFTW plan creation failed");
    }
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (inv) fftw_destroy_plan(inv);
  }
};

FftPlan::FftPlan(const PeriodicGrid& grid) : size_(grid.size()) {
  // FFTW is row-major with the last index fastest; our layout has x fastest.
  std::vector<int> dims;
  for (int a = grid.dim() - 1; a >= 0; --a) dims.push_back(grid.count(a));
  impl_ = std::make_unique<Impl>(dims, size_);
}

FftPlan::FftPlan(int n) : size_(static_cast<std::size_t>(n)) {
  if (n < 1) throw std::invalid_argument("FftPlan: length must be positive");
  impl_ = std::make_unique<Impl>(std::vector<int>{n}, size_);
}

FftPlan::~FftPlan() = default;
FftPlan::FftPlan(FftPlan&&) noexcept = default;
FftPlan& FftPlan::operator=(FftPlan&&) noexcept = default;

void FftPlan::forward(std::span<cplx> data) const {
  if (data.size() != size_) throw std::invalid_argument("FftPlan::forward: size mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(impl_->fwd, p, p);
}

void FftPlan::inverse(std::span<cplx> data) const {
  if (data.size() != size_) throw std::invalid_argument("FftPlan::inverse: size mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(impl_->inv, p, p);
  const double scale = 1.0 / static_cast<double>(size_);
  for (auto& v : data) v *= scale;
}

void set_fft_threads(int threads) {
  std::lock_guard lock(planner_mutex());
  planner_threads() = threads < 1 ? 1 : threads;
}

std::vector<cplx> spectral_second_derivative(std::span<const cplx> values, double length) {
  const int n = static_cast<int>(values.size());
  FftPlan plan(n);
  std::vector<cplx> work(values.begin(), values.end());
  plan.forward(work);
  const double dk = 2.0 * kPi / length;
  for (int j = 0; j < n; ++j) {
    const double k = dk * (j < n / 2 ? j : j - n);
    work[j] *= -k * k;
  }
  plan.inverse(work);
  return work;
}

std::vector<double> spectral_derivative(std::span<const double> values, double length, int order) {
  if (order != 1 && order != 2) throw std::invalid_argument("spectral_derivative: order must be 1 or 2");
  const int n = static_cast<int>(values.size());
  FftPlan plan(n);
  std::vector<cplx> work(values.begin(), values.end());
  plan.forward(work);
  const double dk = 2.0 * kPi / length;
  for (int j = 0; j < n; ++j) {
    double k = dk * (j < n / 2 ? j : j - n);
    // The Nyquist mode has no odd derivative.
    if (order == 1 && n % 2 == 0 && j == n / 2) k = 0.0;
    work[j] *= order == 1 ? cplx{0.0, k} : cplx{-k * k, 0.0};
  }
  plan.inverse(work);
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) out[j] = work[j].real();
  return out;
}

}  // namespace roguewave
