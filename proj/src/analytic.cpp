#include "roguewave/analytic.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace roguewave::analytic {

using boost::math::interpolators::cardinal_cubic_b_spline;

double growth_rate(double k) {
  if (!(k >= 0.0 && k <= 2.0)) {
    std::ostringstream os;
    os << "growth_rate: k = " << k << " outside the MI band [0, 2]";
    throw std::domain_error(os.str());
  }
  return k * std::sqrt(std::max(0.0, 4.0 - k * k));
}

BreatherParams BreatherParams::from_phi(double phi, double x_shift, double t_shift) {
  if (!(phi > 0.0 && phi < kPi / 2))
    throw std::domain_error("BreatherParams: phi must lie in (0, pi/2)");
  BreatherParams p;
  p.phi = phi;
  p.k = 2.0 * std::cos(phi);
  p.sigma = 2.0 * std::sin(2.0 * phi);
  p.x_shift = x_shift;
  p.t_shift = t_shift;
  return p;
}

BreatherParams BreatherParams::from_k(double k, double x_shift, double t_shift) {
  if (!(k > 0.0 && k < 2.0)) throw std::domain_error("BreatherParams: k must lie in (0, 2)");
  return from_phi(std::acos(0.5 * k), x_shift, t_shift);
}

namespace {

// Ratio (cosh(z + 2i phi) + s c) / (cosh z - s c) written with tanh/sech so
// that it stays finite for large |z|.
cplx breather_ratio(double z, double phi, double s_cos) {
  const double th = std::tanh(z);
  const double sech = 1.0 / std::cosh(z);
  const cplx num{std::cos(2.0 * phi) + s_cos * sech, th * std::sin(2.0 * phi)};
  return num / (1.0 - s_cos * sech);
}

}  // namespace

cplx akhmediev(double x, double t, const BreatherParams& p) {
  const double s_cos = std::sin(p.phi) * std::cos(p.k * (x - p.x_shift));
  return breather_ratio(p.sigma * (t - p.t_shift), p.phi, s_cos);
}

cplx peregrine(double x, double t, double x0, double t0) {
  const double X = x - x0;
  const double T = t - t0;
  return 1.0 - cplx{4.0, 16.0 * T} / (1.0 + 4.0 * X * X + 16.0 * T * T);
}

struct Q1DProfiles::Splines {
  cardinal_cubic_b_spline<double> x1;
  cardinal_cubic_b_spline<double> t1;
};

Q1DProfiles::Q1DProfiles(SlowKind kind, double phi, double s_min, double s_max,
                         std::vector<double> x1, std::vector<double> t1, std::vector<bool> defined)
    : kind_(kind), phi_(phi), s_min_(s_min), s_max_(s_max), x1_(std::move(x1)),
      t1_(std::move(t1)), defined_(std::move(defined)) {
  if (x1_.size() != t1_.size()) throw std::invalid_argument("Q1DProfiles: sample count mismatch");
  if (x1_.size() < 8) throw std::invalid_argument("Q1DProfiles: at least 8 samples required");
  if (!(s_max > s_min)) throw std::invalid_argument("Q1DProfiles: empty slow range");
  if (kind == SlowKind::radial && s_min != 0.0)
    throw std::invalid_argument("Q1DProfiles: radial profiles start at R = 0");
  if (defined_.empty()) defined_.assign(x1_.size(), true);
  if (defined_.size() != x1_.size()) throw std::invalid_argument("Q1DProfiles: mask size mismatch");

  // Undefined samples are bridged linearly for spline construction only;
  // evaluation next to them is rejected.
  auto bridge = [&](std::vector<double> v) {
    const std::size_t n = v.size();
    std::size_t last = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!defined_[i]) continue;
      if (last == n) {
        for (std::size_t j = 0; j < i; ++j) v[j] = v[i];
      } else if (i > last + 1) {
        for (std::size_t j = last + 1; j < i; ++j)
          v[j] = v[last] + (v[i] - v[last]) * double(j - last) / double(i - last);
      }
      last = i;
    }
    if (last == n) throw std::invalid_argument("Q1DProfiles: no defined samples");
    for (std::size_t j = last + 1; j < n; ++j) v[j] = v[last];
    return v;
  };
  const auto xs = bridge(x1_);
  const auto ts = bridge(t1_);
  const double h = (s_max_ - s_min_) / double(x1_.size() - 1);
  // Radial profiles are even in R, so their slope vanishes on the axis.
  const double left = kind == SlowKind::radial ? 0.0 : std::numeric_limits<double>::quiet_NaN();
  splines_ = std::make_shared<const Splines>(
      Splines{cardinal_cubic_b_spline<double>(xs.begin(), xs.end(), s_min_, h, left),
              cardinal_cubic_b_spline<double>(ts.begin(), ts.end(), s_min_, h, left)});
}

Q1DProfiles Q1DProfiles::constant(SlowKind kind, double phi, double x1, double t1, double s_min,
                                  double s_max) {
  return Q1DProfiles(kind, phi, s_min, s_max, std::vector<double>(16, x1), std::vector<double>(16, t1));
}

double Q1DProfiles::sample_coord(std::size_t i) const {
  return s_min_ + (s_max_ - s_min_) * double(i) / double(x1_.size() - 1);
}

void Q1DProfiles::check_range(double s) const {
  const double tol = 1e-12 * std::max(1.0, std::abs(s_max_ - s_min_));
  if (s < s_min_ - tol || s > s_max_ + tol) {
    std::ostringstream os;
    os << "Q1DProfiles: slow coordinate " << s << " outside [" << s_min_ << ", " << s_max_ << "]";
    throw std::out_of_range(os.str());
  }
}

bool Q1DProfiles::defined_at(double s) const {
  check_range(s);
  const double h = (s_max_ - s_min_) / double(x1_.size() - 1);
  const double u = (s - s_min_) / h;
  const auto lo = static_cast<std::size_t>(std::clamp(std::floor(u), 0.0, double(x1_.size() - 1)));
  const auto hi = std::min(lo + 1, x1_.size() - 1);
  return defined_[lo] && defined_[hi];
}

double Q1DProfiles::x1(double s) const {
  if (!defined_at(s)) throw std::domain_error("Q1DProfiles: profile undefined (vanishing alpha)");
  return splines_->x1(std::clamp(s, s_min_, s_max_));
}

double Q1DProfiles::t1(double s) const {
  if (!defined_at(s)) throw std::domain_error("Q1DProfiles: profile undefined (vanishing alpha)");
  return splines_->t1(std::clamp(s, s_min_, s_max_));
}

double Q1DProfiles::t1_derivative(double s, int order) const {
  if (!defined_at(s)) throw std::domain_error("Q1DProfiles: profile undefined (vanishing alpha)");
  const double c = std::clamp(s, s_min_, s_max_);
  switch (order) {
    case 0: return splines_->t1(c);
    case 1: return splines_->t1.prime(c);
    case 2: return splines_->t1.double_prime(c);
    default: throw std::invalid_argument("t1_derivative: order must be 0, 1 or 2");
  }
}

cplx q1d_breather(double x, double s, double t, const Q1DProfiles& prof) {
  if (prof.kind() == SlowKind::radial && s < 0.0)
    throw std::out_of_range("q1d_breather: radial coordinate must be non-negative");
  const auto p = BreatherParams::from_phi(prof.phi(), prof.x1(s), prof.t1(s));
  return akhmediev(x, t, p) * std::polar(1.0, 2.0 * t + 2.0 * p.phi);
}

cplx fission_product_sech(double x, double Y, double t, const FissionProductParams& p, int branch) {
  if (branch != 1 && branch != -1) throw std::invalid_argument("fission_product_sech: branch must be +1 or -1");
  const double b = branch;
  const double z = b * (Y - b * (p.sigma * (t - p.t0) + std::log(2.0)));
  const double s_cos = std::sin(p.phi) * std::cos(p.k * (x - p.x10) - p.d * Y * Y);
  // cosh is even, so cosh(Y -+ c -+ 2i phi) = cosh(b(Y -+ c) - 2i phi) with b = +-1;
  // breather_ratio carries +2i phi, hence the conjugate symmetry below.
  const cplx r = std::conj(breather_ratio(z, p.phi, s_cos));
  return r * std::polar(1.0, 2.0 * t + 2.0 * p.phi);
}

cplx fission_product_gauss(double x, double Y, double t, const FissionProductParams& p, int branch) {
  if (branch != 1 && branch != -1) throw std::invalid_argument("fission_product_gauss: branch must be +1 or -1");
  if (!(t > p.t0)) throw std::domain_error("fission_product_gauss: requires t > t0");
  const double b = branch;
  const double root = std::sqrt(p.sigma * (t - p.t0));
  const double xi = Y - b * root;
  const double s_cos = std::sin(p.phi) * std::cos(p.k * (x - p.x10) - p.d * Y * Y);
  const cplx r = std::conj(breather_ratio(b * 2.0 * root * xi, p.phi, s_cos));
  return r * std::polar(1.0, 2.0 * t + 2.0 * p.phi);
}

void PeregrineQ1DParams::validate() const {
  if (!(a > 0.0)) throw std::invalid_argument("PeregrineQ1DParams: a must be positive");
  if (!(delta > 0.0)) throw std::invalid_argument("PeregrineQ1DParams: delta must be positive");
}

double PeregrineQ1DParams::slow_coordinate(double y, double z) const {
  const double scale = std::pow(delta, 1.5);
  return kind == SlowKind::planar ? scale * y : scale * std::hypot(y, z);
}

cplx peregrine_q1d(double x, double slow, double t, const PeregrineQ1DParams& p) {
  p.validate();
  const double s2 = slow * slow;
  return std::polar(1.0, 2.0 * t) * peregrine(x, t, p.x0 + p.d * s2, p.t0 + p.a * s2);
}

double peregrine_ring_radius(double t, const PeregrineQ1DParams& p) {
  p.validate();
  return t <= p.t0 ? 0.0 : std::sqrt((t - p.t0) / p.a);
}

double peregrine_limit_check(double phi, const Window& w) {
  if (!(phi > 0.0 && phi < kPi / 2))
    throw std::domain_error("peregrine_limit_check: phi must lie in (0, pi/2)");
  if (w.nx < 2 || w.nt < 2) throw std::invalid_argument("peregrine_limit_check: window needs >= 2 points per axis");
  const auto p = BreatherParams::from_phi(phi);
  const cplx phase = std::polar(1.0, 2.0 * phi);
  double sup = 0.0;
  for (int i = 0; i < w.nx; ++i) {
    const double x = w.x_min + (w.x_max - w.x_min) * i / double(w.nx - 1);
    for (int j = 0; j < w.nt; ++j) {
      const double t = w.t_min + (w.t_max - w.t_min) * j / double(w.nt - 1);
      sup = std::max(sup, std::abs(akhmediev(x, t, p) * phase - peregrine(x, t)));
    }
  }
  return sup;
}

}  // namespace roguewave::analytic
