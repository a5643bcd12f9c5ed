#include <cmath>
#include <optional>
#include <random>

#include <doctest.h>

#include "roguewave/diagnostics.hpp"
#include "roguewave/mae.hpp"

using namespace roguewave;
using namespace roguewave::diagnostics;

namespace {

const double pi = 3.141592653589793;

ComplexField random_field(const PeriodicGrid& g, std::mt19937& rng) {
  std::normal_distribution<double> n;
  ComplexField f(g);
  for (auto& v : f.values) v = {n(rng), n(rng)};
  return f;
}

mae::CauchyData datum(mae::EnvelopeFamily family) {
  mae::CauchyData d;
  d.epsilon = 1e-2;
  d.delta = 1e-2;
  d.Lx = 6.0;
  d.c0_plus = {0.5, 0};
  d.c0_minus = {0.5, 0};
  d.envelope.family = family;
  if (family == mae::EnvelopeFamily::cosine) {
    d.delta = 1e-3;
    d.c0_plus = {0.084, 0};
    d.c0_minus = {0.3, 0.1};
    d.envelope.gamma = 0.3;
    d.envelope.L_Y = 10;
  }
  return d;
}

struct Synthetic {
  std::optional<mae::MAEPrediction> prediction;
  std::vector<PeakRecord> records;
  PeriodicGrid grid;
};

// Snapshots of the analytic approximant on the lattice, no simulation.
Synthetic synthesize(const mae::CauchyData& d, int ny, double t_from, double t_to, double dt) {
  const double span = d.envelope.periodic() ? d.envelope.L_Y : 2 * d.envelope.default_extent();
  Synthetic s;
  s.grid = make_grid({d.Lx, span / d.delta}, {64, ny});
  s.prediction = mae::predict_events(d, covering_domain(s.grid, d.delta, analytic::SlowKind::planar));
  Q1DFieldSampler sampler(s.prediction->profiles, d.delta, s.grid);
  const int n = static_cast<int>(std::round((t_to - t_from) / dt));
  for (int i = 0; i <= n; ++i) s.records.push_back(track_peaks(sampler.at(t_from + i * dt)));
  return s;
}

// Every predicted fission or fusion whose site lies on the lattice box (periodic
// images included) is matched by a detected event of the same kind within 0.02.
void check_recovered(const Synthetic& s, const mae::CauchyData& d) {
  const auto detected = detect_fission_fusion(s.records);
  const double box = s.grid.length(1) * d.delta;
  int expected = 0;
  std::vector<bool> used(detected.size(), false);
  for (const auto& e : s.prediction->events) {
    if (e.kind == mae::EventKind::first_appearance_max) continue;
    double site = std::remainder(e.slow, box);
    if (site >= 0.5 * box - 1e-9) site -= box;
    bool dup = false;
    for (const auto& f : s.prediction->events)
      if (&f != &e && f.kind == e.kind && std::abs(f.time - e.time) < 1e-9 && &f < &e &&
          std::abs(std::remainder(f.slow - e.slow, box)) < 1e-6)
        dup = true;
    if (dup) continue;
    ++expected;
    bool found = false;
    for (std::size_t i = 0; i < detected.size(); ++i) {
      if (used[i] || detected[i].kind != e.kind) continue;
      const double ds = std::abs(std::remainder(detected[i].coord * d.delta - site, box));
      if (ds < 0.2 && std::abs(detected[i].time - e.time) < 0.02) {
        used[i] = found = true;
        break;
      }
    }
    CHECK_MESSAGE(found, mae::to_string(e.kind) << " at s = " << e.slow << ", t = " << e.time);
  }
  CHECK(detected.size() == static_cast<std::size_t>(expected));
}

}  // namespace

TEST_SUITE("diagnostics") {
  TEST_CASE("uniform distance is a metric") {
    std::mt19937 rng(17);
    const auto g = make_grid({1.0, 1.0}, {8, 8});
    for (int trial = 0; trial < 20; ++trial) {
      const auto a = random_field(g, rng), b = random_field(g, rng), c = random_field(g, rng);
      CHECK(uniform_distance(a, a) == 0.0);
      CHECK(uniform_distance(a, b) == uniform_distance(b, a));
      CHECK(uniform_distance(a, b) > 0.0);
      CHECK(uniform_distance(a, c) <= uniform_distance(a, b) + uniform_distance(b, c) + 1e-15);
    }
    CHECK_THROWS(uniform_distance(ComplexField(g), ComplexField(make_grid({1.0}, {8}))));
  }

  TEST_CASE("evaluator and sampler distances agree") {
    const auto d = datum(mae::EnvelopeFamily::gaussian);
    const auto g = make_grid({6.0, 1000.0}, {16, 32});
    const auto p = mae::predict_events(d, covering_domain(g, d.delta, analytic::SlowKind::planar));
    Q1DFieldSampler s(p.profiles, d.delta, g);
    ComplexField one(g, 2.9);
    for (auto& v : one.values) v = 1.0;
    const double a = s.distance(one);
    const double b = uniform_distance(one, [&](double x, double y, double, double t) {
      return analytic::q1d_breather(x, d.delta * y, t, p.profiles);
    }, 2.9);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }

  TEST_CASE("peaks are refined to sub-lattice positions") {
    const auto g = make_grid({10.0, 10.0}, {64, 64});
    ComplexField f(g);
    const double x0 = 0.37, y0 = -1.21;
    for (int j = 0; j < 64; ++j)
      for (int i = 0; i < 64; ++i) {
        const double x = g.coords(0)[i] - x0, y = g.coords(1)[j] - y0;
        f.at(i, j) = 1.0 + 2.0 * std::exp(-(x * x + 2 * y * y));
      }
    const auto r = track_peaks(f);
    REQUIRE(r.peaks.size() == 1);
    CHECK(r.peaks[0].position[0] == doctest::Approx(x0).epsilon(0.02));
    CHECK(r.peaks[0].position[1] == doctest::Approx(y0).epsilon(0.02));
    CHECK(r.peaks[0].height == doctest::Approx(3.0).epsilon(0.01));
    CHECK(r.peaks[0].curvature < 0);
    CHECK(r.max_modulus == doctest::Approx(3.0).epsilon(0.01));
    CHECK(track_peaks(f, {3.5, 1}).peaks.empty());
  }

  TEST_CASE("exponent fit recovers a power law") {
    std::vector<std::pair<double, double>> tr;
    for (int i = 1; i <= 30; ++i) {
      const double tau = 0.5 * i / 30.0;
      tr.push_back({2.0 + tau, 0.3 + 1.7 * std::pow(tau, 0.5)});
    }
    tr.push_back({3.0, 99.0});
    const auto f = fit_critical_exponent(tr, 2.0, 0.3);
    CHECK(f.exponent == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(f.amplitude == doctest::Approx(1.7).epsilon(1e-10));
    CHECK(f.samples == 30);
    tr.resize(5);
    CHECK_THROWS_AS(fit_critical_exponent(tr, 2.0, 0.3), std::invalid_argument);
  }

  TEST_CASE("crest time from a parabola") {
    std::vector<double> t, v;
    for (int i = 0; i <= 20; ++i) {
      t.push_back(0.1 * i);
      v.push_back(3.0 - std::pow(t.back() - 1.234, 2));
    }
    CHECK(crest_time(t, v) == doctest::Approx(1.234).epsilon(1e-12));
    v[2] = 3.5;
    CHECK(crest_time(t, v) == doctest::Approx(0.2).epsilon(0.1));
    CHECK(first_crest_time(t, v, 3.2) == doctest::Approx(0.2).epsilon(0.1));
    v[2] = 1.0;
    CHECK(first_crest_time(t, v, 2.9) == doctest::Approx(1.234).epsilon(1e-12));
  }

  TEST_CASE("isosurface topology") {
    const auto g = make_grid({8.0, 8.0, 8.0}, {32, 32, 32});
    ComplexField ball(g), ring(g), pair(g);
    for (int k = 0; k < 32; ++k)
      for (int j = 0; j < 32; ++j)
        for (int i = 0; i < 32; ++i) {
          const double x = g.coords(0)[i], y = g.coords(1)[j], z = g.coords(2)[k];
          const double r = std::hypot(y, z);
          ball.at(i, j, k) = std::exp(-(x * x + y * y + z * z));
          ring.at(i, j, k) = std::exp(-(x * x + (r - 2) * (r - 2)) * 2);
          pair.at(i, j, k) = std::exp(-(x * x + (y - 2) * (y - 2) + z * z)) + std::exp(-(x * x + (y + 2) * (y + 2) + z * z));
        }
    const auto b = isosurface_topology(ball, 0.5);
    CHECK(b.components == 1);
    CHECK(b.euler_characteristic == 1);
    CHECK(!b.ring);
    const auto t = isosurface_topology(ring, 0.5);
    CHECK(t.components == 1);
    CHECK(t.euler_characteristic == 0);
    CHECK(t.ring);
    const auto p = isosurface_topology(pair, 0.5);
    CHECK(p.components == 2);
    CHECK(p.euler_characteristic == 2);
    CHECK(!p.ring);
    CHECK_THROWS(isosurface_topology(ComplexField(make_grid({1.0, 1.0}, {8, 8})), 0.5));
  }

  TEST_CASE("curvature sign at the crest flips at t0") {
    const auto s = synthesize(datum(mae::EnvelopeFamily::gaussian), 128, 2.0, 2.0, 1.0);
    Q1DFieldSampler sampler(s.prediction->profiles, 1e-2, s.grid);
    const double t0 = s.prediction->t0;
    const int mid = s.grid.count(1) / 2;
    CHECK(track_peaks(sampler.at(t0 - 0.05)).ridge.curvature[mid] < 0);
    CHECK(track_peaks(sampler.at(t0 + 0.05)).ridge.curvature[mid] > 0);
  }

  TEST_CASE("events recovered from the analytic field: cosine") {
    const auto d = datum(mae::EnvelopeFamily::cosine);
    check_recovered(synthesize(d, 256, 3.0, 4.3, 0.01), d);
  }

  TEST_CASE("events recovered from the analytic field: sech") {
    const auto d = datum(mae::EnvelopeFamily::sech);
    check_recovered(synthesize(d, 512, 2.5, 4.0, 0.01), d);
  }

  TEST_CASE("events recovered from the analytic field: gaussian") {
    const auto d = datum(mae::EnvelopeFamily::gaussian);
    check_recovered(synthesize(d, 128, 2.5, 4.0, 0.01), d);
  }

  TEST_CASE("events recovered from the analytic field: double hump") {
    const auto d = datum(mae::EnvelopeFamily::double_hump);
    const auto s = synthesize(d, 256, 2.5, 4.5, 0.01);
    check_recovered(s, d);
    const auto ev = detect_fission_fusion(s.records);
    REQUIRE(ev.size() == 3);
    CHECK(ev[0].kind == mae::EventKind::fission);
    CHECK(ev[1].kind == mae::EventKind::fission);
    CHECK(ev[2].kind == mae::EventKind::fusion);
    CHECK(ev[0].time == doctest::Approx(ev[1].time).epsilon(1e-9));
  }

  TEST_CASE("branches follow the square-root law") {
    const auto d = datum(mae::EnvelopeFamily::gaussian);
    const auto s = synthesize(d, 256, 2.6, 3.6, 0.02);
    const auto ev = detect_fission_fusion(s.records);
    REQUIRE(!ev.empty());
    const auto br = fission_branches(s.records, 0.0, ev[0].time);
    for (const auto& b : br) {
      std::vector<std::pair<double, double>> tr;
      for (const auto& p : b) tr.push_back({p.time, p.coord * d.delta});
      const auto f = fit_critical_exponent(tr, ev[0].time);
      CHECK(f.exponent == doctest::Approx(0.5).epsilon(0.2));
      CHECK(f.amplitude == doctest::Approx(mae::sqrt_law_amplitude(d, 0.0)).epsilon(0.15));
    }
    CHECK(!associate_ridge_tracks(s.records).empty());
  }

  TEST_CASE("scan classifies a point outside the MI band as no growth") {
    const auto pts = mi_domain_scan({2, -1, 1}, {{2 * pi / 4, 2 * pi / 2}}, 1e-2, 2.0);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].classification == ScanClass::no_growth);
    CHECK(to_string(ScanClass::no_fission) == "no_fission");
    const auto bad = mi_domain_scan({1, 1, 1}, {{1.0, 1.0}}, 1e-2, 1.0);
    CHECK(bad[0].classification == ScanClass::failed);
    CHECK(!bad[0].detail.empty());
  }
}
