#include "roguewave/initialdata.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace roguewave::initialdata {

namespace {

void check_x_length(const mae::CauchyData& data, const PeriodicGrid& grid) {
  if (std::abs(grid.length(0) - data.Lx) > 1e-12 * data.Lx) {
    std::ostringstream os;
    os << "grid x length " << grid.length(0) << " differs from Lx = " << data.Lx;
    throw std::invalid_argument(os.str());
  }
}

// Fourier content of the datum at slow coordinate s along x.
struct Modes {
  cplx plus, minus;
  std::vector<std::pair<int, cplx>> stable;
};

Modes modes_at(const mae::CauchyData& data, double s) {
  Modes m{data.c_plus(s), data.c_minus(s), {}};
  if (!data.stable_modes.empty()) {
    const double f = data.envelope.f(s);
    for (const auto& sm : data.stable_modes) m.stable.emplace_back(sm.harmonic, sm.coefficient * f);
  }
  return m;
}

cplx datum(const mae::CauchyData& data, const Modes& m, double x) {
  const double k = data.kx();
  cplx v = m.plus * std::polar(1.0, k * x) + m.minus * std::polar(1.0, -k * x);
  for (const auto& [h, c] : m.stable) v += c * std::polar(1.0, h * k * x);
  return 1.0 + data.epsilon * v;
}

}  // namespace

ComplexField build_planar(const mae::CauchyData& data, const PeriodicGrid& grid) {
  for (const auto& w : data.validate()) warn(w);
  check_x_length(data, grid);
  if (data.envelope.periodic() && grid.dim() >= 2) {
    const double period = data.envelope.L_Y / data.delta;
    const double ratio = grid.length(1) / period;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 || std::round(ratio) < 1) {
      std::ostringstream os;
      os << "grid y length " << grid.length(1) << " is not a whole number of envelope periods " << period;
      throw std::invalid_argument(os.str());
    }
  }
  ComplexField u(grid);
  const auto xs = grid.coords(0);
  const int ny = grid.dim() >= 2 ? grid.count(1) : 1;
  const int nz = grid.dim() >= 3 ? grid.count(2) : 1;
  for (int j = 0; j < ny; ++j) {
    const double s = grid.dim() >= 2 ? data.delta * grid.coords(1)[j] : 0.0;
    const auto m = modes_at(data, s);
    for (int i = 0; i < grid.count(0); ++i) {
      const cplx v = datum(data, m, xs[i]);
      for (int k = 0; k < nz; ++k) u.at(i, j, k) = v;
    }
  }
  return u;
}

ComplexField build_radial(const mae::CauchyData& data, const PeriodicGrid& grid) {
  for (const auto& w : data.validate()) warn(w);
  if (grid.dim() != 3) throw std::invalid_argument("build_radial: a 3-axis grid is required");
  check_x_length(data, grid);
  if (data.envelope.periodic()) throw std::invalid_argument("build_radial: periodic envelopes cannot be radial");
  const double edge = 0.5 * data.delta * std::min(grid.length(1), grid.length(2));
  double f_edge = 0.0;
  try {
    f_edge = data.envelope.f(edge);
  } catch (const std::out_of_range&) {
    f_edge = 1.0;
  }
  if (f_edge > 1e-8) {
    std::ostringstream os;
    os << "build_radial: envelope f = " << f_edge << " at the transverse box edge R = " << edge
       << " exceeds 1e-8; enlarge the box";
    throw std::invalid_argument(os.str());
  }
  ComplexField u(grid);
  const auto xs = grid.coords(0);
  const auto ys = grid.coords(1);
  const auto zs = grid.coords(2);
  for (int k = 0; k < grid.count(2); ++k)
    for (int j = 0; j < grid.count(1); ++j) {
      const double R = data.delta * std::hypot(ys[j], zs[k]);
      // Beyond the sampled extent of a tabulated envelope the datum is the background.
      Modes m{};
      bool inside = true;
      try {
        m = modes_at(data, R);
      } catch (const std::out_of_range&) {
        inside = false;
      }
      for (int i = 0; i < grid.count(0); ++i) u.at(i, j, k) = inside ? datum(data, m, xs[i]) : cplx{1.0, 0.0};
    }
  return u;
}

double doubly_periodic_phi(double kx, double ky, int eta1) {
  const double q2 = kx * kx + eta1 * ky * ky;
  if (!(q2 > 0.0 && q2 < 4.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::acos(0.5 * std::sqrt(q2));
}

ComplexField build_doubly_periodic(double epsilon, double kx, double ky, const PeriodicGrid& grid, int eta1) {
  if (grid.dim() < 2) throw std::invalid_argument("build_doubly_periodic: needs at least 2 axes");
  if (!(kx > 0.0) || !(ky > 0.0)) throw std::invalid_argument("build_doubly_periodic: wavenumbers must be positive");
  auto commensurate = [](double L, double k) {
    const double r = L * k / (2.0 * kPi);
    return std::abs(r - std::round(r)) < 1e-9 && std::round(r) >= 1;
  };
  if (!commensurate(grid.length(0), kx) || !commensurate(grid.length(1), ky))
    throw std::invalid_argument("build_doubly_periodic: grid lengths must be multiples of 2 pi / k");
  if (eta1 != 1 && eta1 != -1) throw std::invalid_argument("build_doubly_periodic: eta1 must be +1 or -1");
  double phi = doubly_periodic_phi(kx, ky, eta1);
  if (std::isnan(phi)) {
    const double q2 = kx * kx + eta1 * ky * ky;
    std::ostringstream os;
    os << "kx^2 + eta1 ky^2 = " << q2 << " lies outside the MI band (0, 4); no growth expected";
    warn(os.str());
    phi = q2 <= 0.0 ? kPi / 2 : 0.0;
  }
  ComplexField u(grid);
  const cplx amp = epsilon * std::polar(1.0, phi);
  const int nz = grid.dim() >= 3 ? grid.count(2) : 1;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < grid.count(1); ++j) {
      const double cy = std::cos(ky * grid.coords(1)[j]);
      for (int i = 0; i < grid.count(0); ++i) u.at(i, j, k) = 1.0 + amp * std::cos(kx * grid.coords(0)[i]) * cy;
    }
  return u;
}

}  // namespace roguewave::initialdata
