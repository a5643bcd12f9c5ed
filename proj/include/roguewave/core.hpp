#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace roguewave {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Member of the focusing MNLS family
///   i u_t + u_xx + eta1 u_yy + eta2 u_zz + 2|u|^2 u = 0.
/// eta1 is ignored for dim < 2 and eta2 for dim < 3.
struct ModelSpec {
  int dim = 1;
  int eta1 = 1;
  int eta2 = 1;

  static ModelSpec nls() { return {1, 1, 1}; }
  static ModelSpec elliptic2d() { return {2, 1, 1}; }
  static ModelSpec hyperbolic2d() { return {2, -1, 1}; }
  static ModelSpec threeD(int eta1, int eta2) { return {3, eta1, eta2}; }

  /// Sign multiplying the second derivative along `axis` (axis 0 is always +1).
  int sign(int axis) const;
  std::string name() const;
  void validate() const;

  bool operator==(const ModelSpec&) const = default;
};

/// Uniform periodic lattice. Coordinates along axis a are
/// x[j] = -L/2 + j L/N, j = 0..N-1.
class PeriodicGrid {
 public:
  PeriodicGrid() = default;
  PeriodicGrid(std::vector<double> lengths, std::vector<int> counts);

  int dim() const { return static_cast<int>(lengths_.size()); }
  std::size_t size() const { return size_; }
  double length(int axis) const { return lengths_.at(axis); }
  int count(int axis) const { return counts_.at(axis); }
  const std::vector<double>& lengths() const { return lengths_; }
  const std::vector<int>& counts() const { return counts_; }
  double spacing(int axis) const { return lengths_.at(axis) / counts_.at(axis); }
  double cell_volume() const;
  double volume() const;

  std::span<const double> coords(int axis) const { return coords_.at(axis); }
  std::span<const double> wavenumbers(int axis) const { return waves_.at(axis); }

  /// Flat index with the x-axis fastest.
  std::size_t index(int i, int j = 0, int k = 0) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(count_or_one(0)) *
               (static_cast<std::size_t>(j) +
                static_cast<std::size_t>(count_or_one(1)) * static_cast<std::size_t>(k));
  }
  std::array<int, 3> unravel(std::size_t flat) const;

  bool operator==(const PeriodicGrid& o) const {
    return lengths_ == o.lengths_ && counts_ == o.counts_;
  }

 private:
  int count_or_one(int axis) const { return axis < dim() ? counts_[axis] : 1; }

  std::vector<double> lengths_;
  std::vector<int> counts_;
  std::vector<std::vector<double>> coords_;
  std::vector<std::vector<double>> waves_;
  std::size_t size_ = 0;
};

PeriodicGrid make_grid(const std::vector<double>& lengths, const std::vector<int>& counts);

/// DFT-ordered wavenumbers: 2 pi / L * (j if j < N/2 else j - N).
std::vector<double> wavenumber_axis(const PeriodicGrid& grid, int axis);

/// Thrown when a field contains NaN or Inf.
class CorruptStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ComplexField {
  PeriodicGrid grid;
  std::vector<cplx> values;
  double time = 0.0;

  ComplexField() = default;
  explicit ComplexField(PeriodicGrid g, double t = 0.0)
      : grid(std::move(g)), values(grid.size(), cplx{0.0, 0.0}), time(t) {}

  cplx& operator[](std::size_t i) { return values[i]; }
  const cplx& operator[](std::size_t i) const { return values[i]; }
  cplx& at(int i, int j = 0, int k = 0) { return values[grid.index(i, j, k)]; }
  const cplx& at(int i, int j = 0, int k = 0) const { return values[grid.index(i, j, k)]; }

  double max_modulus() const;
  void check_finite() const;
};

struct SimulationConfig {
  ModelSpec model;
  PeriodicGrid grid;
  double dt = 1e-3;
  double t_end = 1.0;
  std::vector<double> output_times;
  /// Steps between conservation checks; 0 logs only at outputs.
  int conservation_cadence = 100;
  bool dealias = false;

  void validate() const;
};

/// Warnings are routed through a replaceable handler (stderr by default).
using WarningHandler = std::function<void(const std::string&)>;
void set_warning_handler(WarningHandler handler);
void warn(const std::string& message);

}  // namespace roguewave
