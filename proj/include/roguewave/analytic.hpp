#pragma once

#include <memory>
#include <vector>

#include "roguewave/core.hpp"

namespace roguewave::analytic {

/// MI growth rate k sqrt(4 - k^2) of the unit background; rejects k outside [0, 2].
double growth_rate(double k);

/// Akhmediev breather parameters. phi is primary; k = 2 cos(phi) and
/// sigma = 2 sin(2 phi) are derived.
struct BreatherParams {
  double phi = kPi / 4;
  double k = 0.0;
  double sigma = 0.0;
  double x_shift = 0.0;
  double t_shift = 0.0;

  static BreatherParams from_phi(double phi, double x_shift = 0.0, double t_shift = 0.0);
  static BreatherParams from_k(double k, double x_shift = 0.0, double t_shift = 0.0);
};

/// (cosh(sigma t + 2i phi) + sin(phi) cos(k x)) / (cosh(sigma t) - sin(phi) cos(k x))
/// evaluated at (x - x_shift, t - t_shift). The NLS solution is e^{2it} times this.
cplx akhmediev(double x, double t, const BreatherParams& p);

/// Peregrine instanton 1 - (4 + 16 i t) / (1 + 4 x^2 + 16 t^2) at (x - x0, t - t0).
cplx peregrine(double x, double t, double x0 = 0.0, double t0 = 0.0);

enum class SlowKind { planar, radial };

/// Sampled appearance profiles x1(s), t1(s) on a uniform slow-coordinate
/// lattice, interpolated with cubic B-splines.
class Q1DProfiles {
 public:
  Q1DProfiles(SlowKind kind, double phi, double s_min, double s_max, std::vector<double> x1,
              std::vector<double> t1, std::vector<bool> defined = {});

  /// Profiles that do not depend on the slow coordinate.
  static Q1DProfiles constant(SlowKind kind, double phi, double x1, double t1, double s_min,
                              double s_max);

  SlowKind kind() const { return kind_; }
  double phi() const { return phi_; }
  double s_min() const { return s_min_; }
  double s_max() const { return s_max_; }
  std::size_t samples() const { return x1_.size(); }
  double sample_coord(std::size_t i) const;
  const std::vector<double>& x1_samples() const { return x1_; }
  const std::vector<double>& t1_samples() const { return t1_; }
  bool defined_at(double s) const;

  double x1(double s) const;
  double t1(double s) const;
  double t1_derivative(double s, int order) const;

 private:
  void check_range(double s) const;

  SlowKind kind_;
  double phi_;
  double s_min_, s_max_;
  std::vector<double> x1_, t1_;
  std::vector<bool> defined_;
  struct Splines;
  std::shared_ptr<const Splines> splines_;
};

/// Adiabatic deformation A(x - x1(s), t - t1(s), phi) e^{2it + 2i phi}.
cplx q1d_breather(double x, double s, double t, const Q1DProfiles& prof);

struct FissionProductParams {
  double phi = 0.0;
  double sigma = 0.0;
  double k = 0.0;
  double x10 = 0.0;
  double t0 = 0.0;
  double d = 0.0;
};

/// Separated fission products for the sech envelope, t - t0 >> 1. branch = +1 or -1.
cplx fission_product_sech(double x, double Y, double t, const FissionProductParams& p, int branch);
/// Separated fission products for the Gaussian envelope; requires t > t0.
cplx fission_product_gauss(double x, double Y, double t, const FissionProductParams& p, int branch);

struct PeregrineQ1DParams {
  double x0 = 0.0;
  double t0 = 0.0;
  double a = 1.0;
  double d = 0.0;
  double delta = 1e-2;
  SlowKind kind = SlowKind::planar;

  void validate() const;
  /// Long-wave coordinate y1 = delta^{3/2} y (planar) or r1 = delta^{3/2} sqrt(y^2 + z^2).
  double slow_coordinate(double y, double z = 0.0) const;
};

/// e^{2it} P(x - x0 - d s^2, t - t0 - a s^2) with s the long-wave coordinate.
cplx peregrine_q1d(double x, double slow, double t, const PeregrineQ1DParams& p);

/// Long-wave ring radius sqrt((t - t0)/a) of the deformed Peregrine crest (0 before t0).
double peregrine_ring_radius(double t, const PeregrineQ1DParams& p);

struct Window {
  double x_min = -1.0, x_max = 1.0;
  double t_min = -1.0, t_max = 1.0;
  int nx = 201, nt = 201;
};

/// sup over the window lattice of |A(x,t,phi) e^{2i phi} - P(x,t)|.
/// Rejects phi outside (0, pi/2).
double peregrine_limit_check(double phi, const Window& window);

}  // namespace roguewave::analytic
