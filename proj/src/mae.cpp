#include "roguewave/mae.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace roguewave::mae {

using analytic::Q1DProfiles;
using analytic::SlowKind;

std::string to_string(EnvelopeFamily f) {
  switch (f) {
    case EnvelopeFamily::cosine: return "cosine";
    case EnvelopeFamily::sech: return "sech";
    case EnvelopeFamily::gaussian: return "gaussian";
    case EnvelopeFamily::double_hump: return "double_hump";
    case EnvelopeFamily::tabulated: return "tabulated";
  }
  return "unknown";
}

EnvelopeFamily envelope_family_from_string(const std::string& s) {
  if (s == "cosine") return EnvelopeFamily::cosine;
  if (s == "sech") return EnvelopeFamily::sech;
  if (s == "gaussian") return EnvelopeFamily::gaussian;
  if (s == "double_hump") return EnvelopeFamily::double_hump;
  if (s == "tabulated") return EnvelopeFamily::tabulated;
  throw std::invalid_argument("unknown envelope family '" + s + "'");
}

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::fission: return "fission";
    case EventKind::fusion: return "fusion";
    case EventKind::first_appearance_max: return "first_appearance_max";
  }
  return "unknown";
}

std::string to_string(TrajectoryKind k) {
  switch (k) {
    case TrajectoryKind::sqrt_law: return "sqrt_law";
    case TrajectoryKind::sech_law: return "sech_law";
    case TrajectoryKind::constant_speed: return "constant_speed";
    case TrajectoryKind::ring_radius: return "ring_radius";
    case TrajectoryKind::level_set: return "level_set";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Envelopes

namespace {

double tab_step(const EnvelopeSpec& e) { return e.tab_Y[1] - e.tab_Y[0]; }

// Cubic Lagrange interpolation on the four samples around Y (even extension).
double tab_interp(const EnvelopeSpec& e, const std::vector<double>& v, double Y, int order) {
  const double a = std::abs(Y);
  const double h = tab_step(e);
  const int n = static_cast<int>(v.size());
  if (a > e.tab_Y.back() * (1.0 + 1e-12))
    throw std::out_of_range("tabulated envelope evaluated beyond its last sample");
  auto sample = [&](int i) { return v[static_cast<std::size_t>(std::abs(i))]; };  // mirror at 0
  int i0 = static_cast<int>(std::floor(a / h)) - 1;
  i0 = std::clamp(i0, -n + 1, n - 4);
  const double u = a / h - i0;  // position relative to node i0, in [1, 2] away from the edges
  double w[4], dw[4];
  for (int j = 0; j < 4; ++j) {
    double num = 1.0, den = 1.0, dsum = 0.0;
    for (int m = 0; m < 4; ++m) {
      if (m == j) continue;
      num *= (u - m);
      den *= (j - m);
    }
    for (int m = 0; m < 4; ++m) {
      if (m == j) continue;
      double p = 1.0;
      for (int q = 0; q < 4; ++q)
        if (q != j && q != m) p *= (u - q);
      dsum += p;
    }
    w[j] = num / den;
    dw[j] = dsum / den;
  }
  double r = 0.0;
  for (int j = 0; j < 4; ++j) r += (order == 0 ? w[j] : dw[j] / h) * sample(i0 + j);
  return order == 1 && Y < 0 ? -r : r;
}

// Second derivative from a least-squares quadratic through the 5 samples
// nearest to Y (even extension).
double tab_second_derivative(const EnvelopeSpec& e, double Y) {
  const double h = tab_step(e);
  const int n = static_cast<int>(e.tab_f.size());
  const int c = std::clamp(static_cast<int>(std::lround(std::abs(Y) / h)), -n + 3, n - 3);
  // Centered 5-point least squares quadratic: c2 = sum (j^2 - 2) f_j / 14 (unit spacing).
  double acc = 0.0;
  for (int j = -2; j <= 2; ++j) acc += (j * j - 2.0) * e.tab_f[static_cast<std::size_t>(std::abs(c + j))];
  return 2.0 * (acc / 14.0) / (h * h);
}

}  // namespace

void EnvelopeSpec::validate() const {
  switch (family) {
    case EnvelopeFamily::cosine:
      if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("envelope.gamma must lie in (0, 1)");
      if (!(L_Y > 0.0)) throw std::invalid_argument("envelope.L_Y must be positive");
      break;
    case EnvelopeFamily::double_hump:
      if (!(kappa > 1.0)) throw std::invalid_argument("envelope.kappa must exceed 1");
      break;
    case EnvelopeFamily::tabulated: {
      if (tab_Y.size() < 8 || tab_f.size() != tab_Y.size() || (!tab_g.empty() && tab_g.size() != tab_Y.size()))
        throw std::invalid_argument("envelope.tabulated: need >= 8 samples with matching f/g lengths");
      if (tab_Y.front() != 0.0) throw std::invalid_argument("envelope.tabulated: samples must start at Y = 0");
      const double h = tab_Y[1] - tab_Y[0];
      if (!(h > 0.0)) throw std::invalid_argument("envelope.tabulated: Y samples must increase");
      for (std::size_t i = 1; i < tab_Y.size(); ++i)
        if (std::abs((tab_Y[i] - tab_Y[i - 1]) - h) > 1e-9 * h)
          throw std::invalid_argument("envelope.tabulated: Y samples must be uniformly spaced");
      double fmax = 0.0;
      for (double v : tab_f) {
        if (!(v > 0.0) || v > 1.0 + 1e-12)
          throw std::invalid_argument("envelope.tabulated: f must satisfy 0 < f <= 1");
        fmax = std::max(fmax, v);
      }
      if (std::abs(fmax - 1.0) > 1e-12) throw std::invalid_argument("envelope.tabulated: max f must equal 1");
      break;
    }
    default: break;
  }
}

double EnvelopeSpec::f(double Y) const { return f_derivative(Y, 0); }

double EnvelopeSpec::g(double Y) const {
  if (family == EnvelopeFamily::tabulated) return tab_g.empty() ? 0.0 : tab_interp(*this, tab_g, Y, 0);
  return d * Y * Y;
}

double EnvelopeSpec::f_derivative(double Y, int order) const {
  if (order < 0 || order > 2) throw std::invalid_argument("f_derivative: order must be 0, 1 or 2");
  switch (family) {
    case EnvelopeFamily::cosine: {
      const double w = 2.0 * kPi / L_Y;
      const double s = gamma / (1.0 + gamma);
      if (order == 0) return (1.0 + gamma * std::cos(w * Y)) / (1.0 + gamma);
      if (order == 1) return -s * w * std::sin(w * Y);
      return -s * w * w * std::cos(w * Y);
    }
    case EnvelopeFamily::sech: {
      const double sech = 1.0 / std::cosh(Y);
      const double th = std::tanh(Y);
      if (order == 0) return sech;
      if (order == 1) return -sech * th;
      return sech * (th * th - sech * sech);
    }
    case EnvelopeFamily::gaussian: {
      const double e = std::exp(-Y * Y);
      if (order == 0) return e;
      if (order == 1) return -2.0 * Y * e;
      return (4.0 * Y * Y - 2.0) * e;
    }
    case EnvelopeFamily::double_hump: {
      const double k = kappa;
      const double norm = k * std::exp(1.0 / k - 1.0);
      const double e = std::exp(-Y * Y) / norm;
      const double y2 = Y * Y;
      if (order == 0) return (1.0 + k * y2) * e;
      if (order == 1) return 2.0 * Y * (k - 1.0 - k * y2) * e;
      return (2.0 * (k - 1.0) - 6.0 * k * y2 - 4.0 * y2 * (k - 1.0 - k * y2)) * e;
    }
    case EnvelopeFamily::tabulated:
      if (order == 2) return tab_second_derivative(*this, Y);
      return tab_interp(*this, tab_f, Y, order);
  }
  return 0.0;
}

double EnvelopeSpec::default_extent() const {
  switch (family) {
    case EnvelopeFamily::cosine: return L_Y;
    case EnvelopeFamily::sech: return 20.0;
    case EnvelopeFamily::gaussian: return 5.0;
    case EnvelopeFamily::double_hump: return 6.0;
    case EnvelopeFamily::tabulated: return tab_Y.empty() ? 1.0 : tab_Y.back();
  }
  return 1.0;
}

// ---------------------------------------------------------------------------
// Cauchy data

double CauchyData::phi() const {
  const double k = kx();
  if (!(k > 0.0 && k < 2.0)) throw std::domain_error("kx outside the MI band (0, 2)");
  return std::acos(0.5 * k);
}

double CauchyData::sigma() const { return analytic::growth_rate(kx()); }

cplx CauchyData::c_plus(double Y) const { return c0_plus * envelope.f(Y) * std::polar(1.0, -envelope.g(Y)); }
cplx CauchyData::c_minus(double Y) const { return c0_minus * envelope.f(Y) * std::polar(1.0, envelope.g(Y)); }

std::vector<std::string> CauchyData::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("epsilon: must be positive");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("delta: must be positive");
  if (!(Lx > kPi && Lx < 2.0 * kPi))
    throw std::invalid_argument("Lx: must lie in (pi, 2 pi) for a single unstable mode");
  envelope.validate();
  for (const auto& m : stable_modes)
    if (std::abs(m.harmonic) < 2) throw std::invalid_argument("stable_modes: harmonic must satisfy |m| >= 2");
  std::vector<std::string> warnings;
  if (delta * std::log(1.0 / epsilon) > 0.1) {
    std::ostringstream os;
    os << "MI time scale ln(1/eps) = " << std::log(1.0 / epsilon)
       << " is not small compared to the Q1D scale 1/delta = " << 1.0 / delta
       << "; the first-appearance description may be inaccurate";
    warnings.push_back(os.str());
  }
  if (epsilon > 0.1) warnings.push_back("epsilon is not small; linear-stage matching may be inaccurate");
  return warnings;
}

// ---------------------------------------------------------------------------
// alpha / beta

cplx AlphaBeta::alpha(double Y) const {
  return std::polar(1.0, -phi) * std::conj(data.c_plus(Y)) - std::polar(1.0, phi) * data.c_minus(Y);
}

cplx AlphaBeta::beta(double Y) const {
  return std::polar(1.0, phi) * std::conj(data.c_minus(Y)) - std::polar(1.0, -phi) * data.c_plus(Y);
}

AlphaBeta alpha_beta(const CauchyData& data) {
  const double phi = data.phi();
  const cplx a0 = std::polar(1.0, -phi) * std::conj(data.c0_plus) - std::polar(1.0, phi) * data.c0_minus;
  const cplx b0 = std::polar(1.0, phi) * std::conj(data.c0_minus) - std::polar(1.0, -phi) * data.c0_plus;
  const double scale = std::max({std::abs(data.c0_plus), std::abs(data.c0_minus), 1e-300});
  if (std::abs(a0) <= 1e-14 * scale)
    throw NoGrowthDatum("alpha0 vanishes: the datum excites only the decaying mode (no-growth datum)");
  return AlphaBeta{a0, b0, phi, data};
}

// ---------------------------------------------------------------------------
// Profiles

namespace {

// Periodic envelopes are resolved over at least one period on each side so that
// every half-period maximum of t1 is flanked by minima.
double resolve_extent(const CauchyData& data, const SlowDomain& domain) {
  const double S = domain.extent > 0.0 ? domain.extent : data.envelope.default_extent();
  return data.envelope.periodic() ? std::max(S, data.envelope.L_Y) : S;
}

}  // namespace

Q1DProfiles appearance_profiles(const CauchyData& data, const SlowDomain& domain) {
  const auto ab = alpha_beta(data);
  const double sigma = data.sigma();
  const double k = data.kx();
  const double S = resolve_extent(data, domain);
  const int n = std::max(domain.samples, 8);
  const double s_min = domain.kind == SlowKind::radial ? 0.0 : -S;

  std::vector<double> x1(n), t1(n), arg(n);
  std::vector<bool> defined(n, true);
  for (int i = 0; i < n; ++i) {
    const double s = s_min + (S - s_min) * i / double(n - 1);
    const cplx a = ab.alpha(s);
    const double mod = std::abs(a);
    if (!(mod > 0.0) || !std::isfinite(mod)) {
      defined[i] = false;
      t1[i] = 0.0;
      arg[i] = 0.0;
      continue;
    }
    t1[i] = std::log(sigma * sigma / (2.0 * data.epsilon * mod)) / sigma;
    arg[i] = std::arg(a);
  }
  // Unwrap arg(alpha) outward from the sample nearest s = 0 so that x1(0) = x10.
  const int c = static_cast<int>(std::lround((0.0 - s_min) / (S - s_min) * (n - 1)));
  auto unwrap = [&](int from, int to, int step) {
    for (int i = from + step; i != to + step; i += step) {
      if (!defined[i] || !defined[i - step]) continue;
      double dphi = arg[i] - arg[i - step];
      dphi -= 2.0 * kPi * std::round(dphi / (2.0 * kPi));
      arg[i] = arg[i - step] + dphi;
    }
  };
  unwrap(c, n - 1, 1);
  unwrap(c, 0, -1);
  for (int i = 0; i < n; ++i) x1[i] = (arg[i] + kPi / 2) / k;
  return Q1DProfiles(domain.kind, data.phi(), s_min, S, std::move(x1), std::move(t1), std::move(defined));
}

// ---------------------------------------------------------------------------
// Events

namespace {

struct Extremum {
  double s;
  bool f_max;  // maximum of f, i.e. minimum of t1
};

double bisect_root(const EnvelopeSpec& e, double a, double b) {
  double fa = e.f_derivative(a, 1);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
    const double m = 0.5 * (a + b);
    const double fm = e.f_derivative(m, 1);
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Extrema of f on the symmetric interval [-S, S].
std::vector<Extremum> envelope_extrema(const EnvelopeSpec& env, double S, bool* flat) {
  std::vector<Extremum> out;
  *flat = false;
  if (env.periodic()) {
    if (env.gamma == 0.0) {
      *flat = true;
      return out;
    }
    const double L = env.L_Y;
    const double tol = 1e-9 * L;
    for (long n = static_cast<long>(std::ceil(-S / L - 1)); n * L <= S + tol; ++n) {
      if (n * L >= -S - tol) out.push_back({n * L, true});
      const double m = (n + 0.5) * L;
      if (m >= -S - tol && m <= S + tol) out.push_back({m, false});
    }
    std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.s < b.s; });
    return out;
  }
  const int n = 8193;
  std::vector<double> s(n), f(n);
  double fmin = 1e300, fmax = -1e300;
  for (int i = 0; i < n; ++i) {
    s[i] = -S + 2.0 * S * i / double(n - 1);
    f[i] = env.f(s[i]);
    fmin = std::min(fmin, f[i]);
    fmax = std::max(fmax, f[i]);
  }
  if (fmax - fmin < 1e-12) {
    *flat = true;
    return out;
  }
  for (int i = 1; i + 1 < n; ++i) {
    const bool is_max = f[i] > f[i - 1] && f[i] >= f[i + 1];
    const bool is_min = f[i] < f[i - 1] && f[i] <= f[i + 1];
    if (!is_max && !is_min) continue;
    double site = s[i];
    const double d0 = env.f_derivative(s[i - 1], 1);
    const double d1 = env.f_derivative(s[i + 1], 1);
    if ((d0 > 0) != (d1 > 0)) site = bisect_root(env, s[i - 1], s[i + 1]);
    if (std::abs(site) < 1e-9) site = 0.0;
    out.push_back({site, is_max});
  }
  return out;
}

std::vector<Extremum> domain_extrema(const CauchyData& data, const SlowDomain& domain, double S, bool* flat) {
  auto ex = envelope_extrema(data.envelope, S, flat);
  if (domain.kind == SlowKind::radial)
    ex.erase(std::remove_if(ex.begin(), ex.end(), [](const Extremum& e) { return e.s < 0.0; }), ex.end());
  return ex;
}

double t1_of(const CauchyData& data, double t0, double sigma, double s) {
  return t0 + std::log(1.0 / data.envelope.f(s)) / sigma;
}

// Level-set branch t1(s) = t from a t1 minimum toward the next maximum or the domain edge.
Trajectory level_set_branch(const CauchyData& data, const Q1DProfiles& prof, double t0, double sigma,
                            double site, int branch, double stop, std::size_t origin, TrajectoryKind kind) {
  Trajectory tr;
  tr.kind = kind;
  tr.origin_event = origin;
  tr.branch = branch;
  const int m = 64;
  for (int i = 0; i <= m; ++i) {
    const double s = site + (stop - site) * i / double(m);
    tr.position.push_back(s);
    tr.t.push_back(t1_of(data, t0, sigma, s));
  }
  (void)prof;
  return tr;
}

}  // namespace

double sqrt_law_amplitude(const CauchyData& data, double site) {
  const double f = data.envelope.f(site);
  const double f2 = data.envelope.f_derivative(site, 2);
  if (!(std::abs(f2) > 0.0)) throw std::domain_error("sqrt_law_amplitude: degenerate extremum (f'' = 0)");
  return std::sqrt(2.0 * data.sigma() * f / std::abs(f2));
}

MAEPrediction predict_events(const CauchyData& data, const SlowDomain& domain) {
  for (const auto& w : data.validate()) warn(w);
  const auto ab = alpha_beta(data);
  const double phi = data.phi();
  const double sigma = data.sigma();
  const double k = data.kx();
  const double S = resolve_extent(data, domain);
  const double t0 = std::log(sigma * sigma / (2.0 * data.epsilon * std::abs(ab.alpha0))) / sigma;
  const double x10 = (std::arg(ab.alpha0) + kPi / 2) / k;

  MAEPrediction pred{phi, sigma, k, ab.alpha0, ab.beta0, t0, x10, appearance_profiles(data, domain), {}, {}, {}, true};
  pred.diagnostics.push_back("phi1 in the alpha/beta coefficients is taken equal to phi = arccos(kx/2)");

  bool flat = false;
  const auto ex = domain_extrema(data, domain, S, &flat);
  std::vector<double> minima, maxima;  // of t1
  for (const auto& e : ex) (e.f_max ? minima : maxima).push_back(e.s);
  if (minima.empty()) {
    pred.diagnostics.push_back("t1 has no local minimum in the slow domain: no event predicted");
    return pred;
  }

  const double tmin = [&] {
    double m = 1e300;
    for (double s : minima) m = std::min(m, t1_of(data, t0, sigma, s));
    return m;
  }();

  auto x1_at = [&](double s) { return pred.profiles.x1(std::clamp(s, pred.profiles.s_min(), pred.profiles.s_max())); };

  for (double s : minima) {
    const double t = t1_of(data, t0, sigma, s);
    pred.events.push_back({EventKind::fission, t, x1_at(s), s, 1});
    if (t - tmin < 1e-12) pred.events.push_back({EventKind::first_appearance_max, t, x1_at(s), s, 1});
  }
  // Fusion at maxima of t1 with fission sites on both sides (even extension for radial data).
  for (double s : maxima) {
    const bool left = std::any_of(minima.begin(), minima.end(), [&](double m) { return m < s; }) ||
                      (domain.kind == SlowKind::radial && s == 0.0);
    const bool right = std::any_of(minima.begin(), minima.end(), [&](double m) { return m > s; });
    if (left && right) pred.events.push_back({EventKind::fusion, t1_of(data, t0, sigma, s), x1_at(s), s, 1});
  }
  std::stable_sort(pred.events.begin(), pred.events.end(), [](const Event& a, const Event& b) {
    return a.time < b.time || (a.time == b.time && a.slow < b.slow);
  });

  // Trajectories for every fission event.
  const double lo = domain.kind == SlowKind::radial ? 0.0 : -S;
  for (std::size_t i = 0; i < pred.events.size(); ++i) {
    const auto& ev = pred.events[i];
    if (ev.kind != EventKind::fission) continue;
    const double s = ev.slow;
    const double amp = sqrt_law_amplitude(data, s);
    const bool on_axis = domain.kind == SlowKind::radial && s == 0.0;
    for (int b : {1, -1}) {
      if (on_axis && b < 0) continue;
      // Branch end: nearest t1 maximum in direction b, else the domain edge.
      double stop = b > 0 ? S : lo;
      for (double m : maxima)
        if ((m - s) * b > 0 && std::abs(m - s) < std::abs(stop - s)) stop = m;
      if (std::abs(stop - s) < 1e-12) continue;

      Trajectory sq;
      sq.kind = on_axis ? TrajectoryKind::ring_radius : TrajectoryKind::sqrt_law;
      sq.origin_event = i;
      sq.branch = b;
      sq.exponent = 0.5;
      sq.amplitude = amp;
      const int m = 48;
      const double tau_lo = 1e-4, tau_hi = 0.5;
      for (int j = 0; j < m; ++j) {
        const double tau = tau_lo * std::pow(tau_hi / tau_lo, j / double(m - 1));
        sq.t.push_back(ev.time + tau);
        sq.position.push_back(s + b * amp * std::sqrt(tau));
      }
      pred.trajectories.push_back(std::move(sq));

      const auto kind = data.envelope.family == EnvelopeFamily::sech ? TrajectoryKind::sech_law : TrajectoryKind::level_set;
      auto ls = level_set_branch(data, pred.profiles, t0, sigma, s, b, stop, i, kind);
      if (data.envelope.family == EnvelopeFamily::gaussian && s == 0.0) {
        ls.exponent = 0.5;
        ls.amplitude = std::sqrt(sigma);
      }
      pred.trajectories.push_back(std::move(ls));

      if (data.envelope.family == EnvelopeFamily::sech && s == 0.0) {
        Trajectory cs;
        cs.kind = TrajectoryKind::constant_speed;
        cs.origin_event = i;
        cs.branch = b;
        cs.exponent = 1.0;
        cs.amplitude = sigma;
        for (int j = 0; j <= 32; ++j) {
          const double tau = 3.0 / sigma + 5.0 * j / 32.0;
          const double y = b * (sigma * tau + std::log(2.0));
          if (std::abs(y) > S) break;
          cs.t.push_back(ev.time + tau);
          cs.position.push_back(y);
        }
        if (!cs.t.empty()) pred.trajectories.push_back(std::move(cs));
      }
    }
  }
  return pred;
}

// ---------------------------------------------------------------------------
// Linear stage

namespace {

// Exact linear propagation of the pair (a, conj(b)) for wavenumber q:
// a' = i[(2 - q^2) a + 2 b*], b*' = -i[(2 - q^2) b* + 2 a].
std::pair<cplx, cplx> propagate_pair(double q, cplx a, cplx b, double t) {
  const double c = 2.0 - q * q;
  const double disc = c * c - 4.0;  // = q^2 (q^2 - 4)
  const cplx I{0.0, 1.0};
  const cplx bs = std::conj(b);
  const cplx Ma = I * (c * a + 2.0 * bs);
  const cplx Mb = -I * (c * bs + 2.0 * a);
  double c0, c1;
  if (disc > 0.0) {
    const double w = std::sqrt(disc);
    c0 = std::cos(w * t);
    c1 = std::sin(w * t) / w;
  } else if (disc < 0.0) {
    const double s = std::sqrt(-disc);
    c0 = std::cosh(s * t);
    c1 = std::sinh(s * t) / s;
  } else {
    c0 = 1.0;
    c1 = t;
  }
  const cplx an = c0 * a + c1 * Ma;
  const cplx bsn = c0 * bs + c1 * Mb;
  return {an, std::conj(bsn)};
}

}  // namespace

cplx linear_stage(double x, double Y, double t, const CauchyData& data) {
  const auto ab = alpha_beta(data);
  const double k = data.kx();
  const double phi = ab.phi;
  const double sigma = data.sigma();
  const cplx alpha = ab.alpha(Y);
  const cplx beta = ab.beta(Y);
  const double x1 = (std::arg(alpha) + kPi / 2) / k;
  const double x0 = (-std::arg(beta) + kPi / 2) / k;
  cplx w = (2.0 * std::abs(alpha) / sigma) * std::exp(cplx{sigma * t, phi}) * std::cos(k * (x - x1)) +
           (2.0 * std::abs(beta) / sigma) * std::exp(cplx{-sigma * t, -phi}) * std::cos(k * (x - x0));

  if (!data.stable_modes.empty()) {
    const double f = data.envelope.f(Y);
    int top = 0;
    for (const auto& m : data.stable_modes) top = std::max(top, std::abs(m.harmonic));
    for (int h = 2; h <= top; ++h) {
      cplx a{0.0, 0.0}, b{0.0, 0.0};
      bool any = false;
      for (const auto& m : data.stable_modes) {
        if (m.harmonic == h) { a += m.coefficient * f; any = true; }
        if (m.harmonic == -h) { b += m.coefficient * f; any = true; }
      }
      if (!any) continue;
      const double q = h * k;
      const auto [at, bt] = propagate_pair(q, a, b, t);
      w += at * std::polar(1.0, q * x) + bt * std::polar(1.0, -q * x);
    }
  }
  return std::polar(1.0, 2.0 * t) * (1.0 + data.epsilon * w);
}

// ---------------------------------------------------------------------------
// Curvature flips

std::vector<CurvatureFlip> curvature_flip_prediction(const CauchyData& data, const SlowDomain& domain) {
  const auto ab = alpha_beta(data);
  const double sigma = data.sigma();
  const double S = resolve_extent(data, domain);
  const double t0 = std::log(sigma * sigma / (2.0 * data.epsilon * std::abs(ab.alpha0))) / sigma;
  bool flat = false;
  const auto ex = domain_extrema(data, domain, S, &flat);
  std::vector<CurvatureFlip> out;
  if (flat) return out;
  for (const auto& e : ex) {
    const double f = data.envelope.f(e.s);
    const double f2 = data.envelope.f_derivative(e.s, 2);
    const double t1pp = -f2 / (sigma * f);
    if (std::abs(t1pp) < 1e-10) {
      std::ostringstream os;
      os << "curvature_flip_prediction: degenerate extremum at s = " << e.s << " (f'' = 0)";
      throw std::domain_error(os.str());
    }
    CurvatureFlip flip;
    flip.slow = e.s;
    flip.time = t1_of(data, t0, sigma, e.s);
    flip.t1_second_derivative = t1pp;
    flip.sign_before = t1pp > 0 ? -1 : 1;
    flip.sign_after = -flip.sign_before;
    out.push_back(flip);
  }
  std::stable_sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.time < b.time; });
  return out;
}

}  // namespace roguewave::mae
