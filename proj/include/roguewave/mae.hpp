#pragma once

#include <optional>
#include <string>
#include <vector>

#include "roguewave/analytic.hpp"
#include "roguewave/core.hpp"

namespace roguewave::mae {

enum class EnvelopeFamily { cosine, sech, gaussian, double_hump, tabulated };

std::string to_string(EnvelopeFamily f);
EnvelopeFamily envelope_family_from_string(const std::string& s);

/// Even envelope f(Y) with max f = 1 and chirp phase g(Y). Analytic families:
///   cosine       (1 + gamma cos(2 pi Y / L_Y)) / (1 + gamma)
///   sech         1 / cosh(Y)
///   gaussian     exp(-Y^2)
///   double_hump  (1 + kappa Y^2) exp(-Y^2) / (kappa exp(1/kappa - 1)), maxima at
///                +-sqrt(1 - 1/kappa), minimum at 0 (kappa > 1)
/// with g(Y) = d Y^2. The tabulated family interpolates samples of f and g
/// given on Y >= 0 and extends them evenly.
struct EnvelopeSpec {
  EnvelopeFamily family = EnvelopeFamily::gaussian;
  double gamma = 0.3;
  double L_Y = 10.0;
  double d = 0.0;
  double kappa = 4.0;
  std::vector<double> tab_Y;
  std::vector<double> tab_f;
  std::vector<double> tab_g;

  void validate() const;
  double f(double Y) const;
  double g(double Y) const;
  /// Derivative of f of order 0, 1 or 2 (tabulated: second derivative by a
  /// local quadratic fit over 5 samples).
  double f_derivative(double Y, int order) const;
  /// Slow extent S such that [-S, S] is the natural domain for predictions.
  double default_extent() const;
  bool periodic() const { return family == EnvelopeFamily::cosine; }
  bool operator==(const EnvelopeSpec&) const = default;
};

/// Additional Fourier mode eps * c * f(Y) e^{i m kx x}, |m| >= 2.
struct StableMode {
  int harmonic = 2;
  cplx coefficient{0.0, 0.0};
  bool operator==(const StableMode&) const = default;
};

/// Cauchy datum u(x, Y, 0) = 1 + eps [c+(Y) e^{i kx x} + c-(Y) e^{-i kx x} + stable modes]
/// with c+-(Y) = c0+- f(Y) e^{-+ i g(Y)}, Y = delta y.
struct CauchyData {
  double epsilon = 1e-2;
  double delta = 1e-2;
  double Lx = 6.0;
  cplx c0_plus{0.5, 0.0};
  cplx c0_minus{0.5, 0.0};
  EnvelopeSpec envelope;
  std::vector<StableMode> stable_modes;

  double kx() const { return 2.0 * kPi / Lx; }
  double phi() const;
  double sigma() const;
  cplx c_plus(double Y) const;
  cplx c_minus(double Y) const;
  /// Throws std::invalid_argument on violated invariants; returns soft warnings.
  std::vector<std::string> validate() const;
  bool operator==(const CauchyData&) const = default;
};

struct AlphaBeta {
  cplx alpha0;
  cplx beta0;
  double phi;
  /// General pointwise formulas e^{-i phi} c+*(Y) - e^{i phi} c-(Y) and e^{i phi} c-*(Y) - e^{-i phi} c+(Y).
  cplx alpha(double Y) const;
  cplx beta(double Y) const;
  CauchyData data;
};

class NoGrowthDatum : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Throws NoGrowthDatum when alpha0 vanishes.
AlphaBeta alpha_beta(const CauchyData& data);

struct SlowDomain {
  analytic::SlowKind kind = analytic::SlowKind::planar;
  /// Planar: [-extent, extent]; radial: [0, extent]. Non-positive means the envelope default.
  double extent = 0.0;
  int samples = 4097;
};

analytic::Q1DProfiles appearance_profiles(const CauchyData& data, const SlowDomain& domain = {});

enum class EventKind { fission, fusion, first_appearance_max };
std::string to_string(EventKind k);

struct Event {
  EventKind kind = EventKind::fission;
  double time = 0.0;
  double x = 0.0;
  double slow = 0.0;
  int multiplicity = 1;
};

enum class TrajectoryKind { sqrt_law, sech_law, constant_speed, ring_radius, level_set };
std::string to_string(TrajectoryKind k);

struct Trajectory {
  TrajectoryKind kind = TrajectoryKind::sqrt_law;
  std::size_t origin_event = 0;
  int branch = 1;
  std::vector<double> t;
  std::vector<double> position;
  /// Power-law exponent of position offset vs (t - t_event) when the law has one.
  std::optional<double> exponent;
  /// Amplitude of the power law, when applicable.
  std::optional<double> amplitude;
};

struct MAEPrediction {
  double phi = 0.0;
  double sigma = 0.0;
  double kx = 0.0;
  cplx alpha0;
  cplx beta0;
  double t0 = 0.0;
  double x10 = 0.0;
  analytic::Q1DProfiles profiles;
  std::vector<Event> events;
  std::vector<Trajectory> trajectories;
  std::vector<std::string> diagnostics;
  bool phi1_assumed_equal_phi = true;
};

/// Local minima of t1 give fission events, maxima flanked by minima give fusion
/// events. Trajectories follow the family's law (sqrt near fission, exact level
/// sets t1(s) = t, sech and constant-speed asymptotics, ring radius for radial data).
MAEPrediction predict_events(const CauchyData& data, const SlowDomain& domain = {});

/// Linearized field e^{2it}[1 + eps(growing + decaying + stable modes)].
cplx linear_stage(double x, double Y, double t, const CauchyData& data);

struct CurvatureFlip {
  double slow = 0.0;
  double time = 0.0;
  int sign_before = -1;
  int sign_after = 1;
  double t1_second_derivative = 0.0;
};

/// Sign flips of the crest's transverse curvature of |u1|^2 predicted at every
/// extremum of t1. Empty for a flat envelope; throws std::domain_error when an
/// extremum is degenerate (vanishing second derivative).
std::vector<CurvatureFlip> curvature_flip_prediction(const CauchyData& data,
                                                     const SlowDomain& domain = {});

/// sqrt(2 sigma / |f''(s)|): amplitude of the universal square-root separation law.
double sqrt_law_amplitude(const CauchyData& data, double site);

}  // namespace roguewave::mae
