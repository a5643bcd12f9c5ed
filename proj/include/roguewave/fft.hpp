#pragma once

#include <memory>
#include <span>
#include <vector>

#include "roguewave/core.hpp"

namespace roguewave {

/// In-place complex DFT over an N-dimensional lattice stored x-fastest.
/// Plans are created with FFTW_ESTIMATE so that results are bit-reproducible
/// run to run. The inverse is normalized by 1/N.
class FftPlan {
 public:
  explicit FftPlan(const PeriodicGrid& grid);
  /// 1-D transform of length n.
  explicit FftPlan(int n);
  ~FftPlan();

  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  FftPlan(FftPlan&&) noexcept;
  FftPlan& operator=(FftPlan&&) noexcept;

  std::size_t size() const { return size_; }

  void forward(std::span<cplx> data) const;
  void inverse(std::span<cplx> data) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::size_t size_ = 0;
};

/// Sets the number of threads used by subsequently created plans.
void set_fft_threads(int threads);

/// Spectral second derivative of a periodic 1-D complex sequence of period `length`.
std::vector<cplx> spectral_second_derivative(std::span<const cplx> values, double length);
/// Spectral derivative of given order (1 or 2) of a periodic real sequence.
std::vector<double> spectral_derivative(std::span<const double> values, double length, int order);

}  // namespace roguewave
