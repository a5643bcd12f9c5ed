#include "roguewave/core.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <sstream>

namespace roguewave {

int ModelSpec::sign(int axis) const {
  switch (axis) {
    case 0: return 1;
    case 1: return eta1;
    case 2: return eta2;
    default: throw std::out_of_range("ModelSpec::sign: axis out of range");
  }
}

std::string ModelSpec::name() const {
  if (dim == 1) return "NLS";
  std::ostringstream os;
  if (dim == 2) {
    os << (eta1 > 0 ? "ENLS" : "HNLS") << "2+1";
  } else {
    const bool elliptic = eta1 > 0 && eta2 > 0;
    os << (elliptic ? "ENLS" : "HNLS") << "3+1(" << eta1 << "," << eta2 << ")";
  }
  return os.str();
}

void ModelSpec::validate() const {
  if (dim < 1 || dim > 3) throw std::invalid_argument("model.dim must be 1, 2 or 3");
  if (eta1 != 1 && eta1 != -1) throw std::invalid_argument("model.eta1 must be +1 or -1");
  if (eta2 != 1 && eta2 != -1) throw std::invalid_argument("model.eta2 must be +1 or -1");
}

PeriodicGrid::PeriodicGrid(std::vector<double> lengths, std::vector<int> counts)
    : lengths_(std::move(lengths)), counts_(std::move(counts)) {
  if (lengths_.size() != counts_.size())
    throw std::invalid_argument("grid: lengths and counts differ in dimension");
  if (lengths_.empty() || lengths_.size() > 3)
    throw std::invalid_argument("grid: dimension must be 1, 2 or 3");
  size_ = 1;
  for (std::size_t a = 0; a < lengths_.size(); ++a) {
    const double L = lengths_[a];
    const int N = counts_[a];
    if (!(L > 0.0) || !std::isfinite(L))
      throw std::invalid_argument("grid: length must be positive");
    if (N < 8) throw std::invalid_argument("grid: count must be at least 8");
    std::vector<double> x(N), k(N);
    const double dk = 2.0 * kPi / L;
    for (int j = 0; j < N; ++j) {
      x[j] = -0.5 * L + j * (L / N);
      k[j] = dk * (j < N / 2 ? j : j - N);
    }
    coords_.push_back(std::move(x));
    waves_.push_back(std::move(k));
    size_ *= static_cast<std::size_t>(N);
  }
}

double PeriodicGrid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim(); ++a) v *= spacing(a);
  return v;
}

double PeriodicGrid::volume() const {
  double v = 1.0;
  for (double L : lengths_) v *= L;
  return v;
}

std::array<int, 3> PeriodicGrid::unravel(std::size_t flat) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = 0; a < dim(); ++a) {
    idx[a] = static_cast<int>(flat % static_cast<std::size_t>(counts_[a]));
    flat /= static_cast<std::size_t>(counts_[a]);
  }
  return idx;
}

PeriodicGrid make_grid(const std::vector<double>& lengths, const std::vector<int>& counts) {
  return PeriodicGrid(lengths, counts);
}

std::vector<double> wavenumber_axis(const PeriodicGrid& grid, int axis) {
  if (axis < 0 || axis >= grid.dim())
    throw std::out_of_range("wavenumber_axis: axis out of range");
  auto k = grid.wavenumbers(axis);
  return {k.begin(), k.end()};
}

double ComplexField::max_modulus() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

void ComplexField::check_finite() const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i].real()) || !std::isfinite(values[i].imag())) {
      std::ostringstream os;
      os << "non-finite amplitude at flat index " << i << " (t = " << time << ")";
      throw CorruptStateError(os.str());
    }
  }
}

void SimulationConfig::validate() const {
  model.validate();
  if (grid.dim() != model.dim)
    throw std::invalid_argument("simulation: grid dimension does not match model");
  if (!(dt > 0.0)) throw std::invalid_argument("simulation: dt must be positive");
  if (!(t_end > 0.0)) throw std::invalid_argument("simulation: t_end must be positive");
  if (dt > t_end) throw std::invalid_argument("simulation: dt exceeds t_end");
  if (!std::is_sorted(output_times.begin(), output_times.end()))
    throw std::invalid_argument("simulation: output times must be sorted");
  for (double t : output_times)
    if (t < 0.0 || t > t_end)
      throw std::invalid_argument("simulation: output time outside [0, t_end]");
  if (conservation_cadence < 0)
    throw std::invalid_argument("simulation: conservation cadence must be >= 0 (0 disables periodic checks)");
}

namespace {
std::mutex g_warn_mutex;
WarningHandler& handler_slot() {
  static WarningHandler h = [](const std::string& m) { std::cerr << "warning: " << m << '\n'; };
  return h;
}
}  // namespace

void set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(g_warn_mutex);
  handler_slot() = handler ? std::move(handler)
                           : [](const std::string& m) { std::cerr << "warning: " << m << '\n'; };
}

void warn(const std::string& message) {
  std::lock_guard lock(g_warn_mutex);
  handler_slot()(message);
}

}  // namespace roguewave
