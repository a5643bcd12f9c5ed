#include <cmath>

#include <doctest.h>

#include "roguewave/analytic.hpp"

using namespace roguewave;
using namespace roguewave::analytic;

namespace {

// Sixth-order central differences.
template <class F>
cplx d1(const F& f, double h) {
  return (-f(-3 * h) + 9.0 * f(-2 * h) - 45.0 * f(-h) + 45.0 * f(h) - 9.0 * f(2 * h) + f(3 * h)) / (60.0 * h);
}
template <class F>
cplx d2(const F& f, double h) {
  return (2.0 * f(-3 * h) - 27.0 * f(-2 * h) + 270.0 * f(-h) - 490.0 * f(0.0) + 270.0 * f(h) - 27.0 * f(2 * h) +
          2.0 * f(3 * h)) /
         (180.0 * h * h);
}

template <class U>
double nls_residual(const U& u, double x, double t) {
  const double h = 2e-3;
  const cplx ut = d1([&](double e) { return u(x, t + e); }, h);
  const cplx uxx = d2([&](double e) { return u(x + e, t); }, h);
  const cplx v = u(x, t);
  return std::abs(cplx{0, 1} * ut + uxx + 2.0 * std::norm(v) * v);
}

cplx naive_breather(double x, double t, double phi) {
  const double k = 2 * std::cos(phi), s = 2 * std::sin(2 * phi);
  const cplx num = std::cosh(cplx{s * t, 2 * phi}) + std::sin(phi) * std::cos(k * x);
  return num / (std::cosh(s * t) - std::sin(phi) * std::cos(k * x));
}

}  // namespace

TEST_SUITE("analytic") {
  TEST_CASE("growth rate at the standard box") {
    const double k = 2 * 3.141592653589793 / 6;
    CHECK(growth_rate(k) == doctest::Approx(k * std::sqrt(4 - k * k)).epsilon(1e-15));
    CHECK(growth_rate(k) == doctest::Approx(1.7844).epsilon(1e-4));
    CHECK(growth_rate(0.0) == 0.0);
    CHECK(growth_rate(2.0) == 0.0);
    CHECK(growth_rate(std::sqrt(2.0)) == doctest::Approx(2.0));
    CHECK_THROWS_AS(growth_rate(2.1), std::domain_error);
    CHECK_THROWS_AS(growth_rate(-0.1), std::domain_error);
  }

  TEST_CASE("breather parameters") {
    const auto p = BreatherParams::from_k(3.141592653589793 / 3);
    CHECK(p.phi == doctest::Approx(1.0197267436954502).epsilon(1e-14));
    CHECK(p.sigma == doctest::Approx(growth_rate(p.k)).epsilon(1e-14));
    CHECK(1 + 2 * std::sin(p.phi) == doctest::Approx(2.7039299541846926).epsilon(1e-14));
    CHECK_THROWS(BreatherParams::from_phi(0.0));
    CHECK_THROWS(BreatherParams::from_phi(kPi / 2));
    CHECK_THROWS(BreatherParams::from_k(2.0));
  }

  TEST_CASE("stable form agrees with the textbook ratio") {
    for (double phi : {0.3, kPi / 3, 1.4})
      for (double t : {-3.0, -0.7, 0.0, 0.4, 2.5})
        for (double x : {-2.0, 0.0, 0.9}) {
          const auto p = BreatherParams::from_phi(phi);
          CHECK(std::abs(akhmediev(x, t, p) - naive_breather(x, t, phi)) < 1e-12);
        }
    const auto p = BreatherParams::from_phi(1.0);
    CHECK(std::isfinite(std::abs(akhmediev(0.0, 500.0, p))));
  }

  TEST_CASE("breather solves the NLS") {
    for (double phi : {0.4, kPi / 3, 1.2}) {
      const auto p = BreatherParams::from_phi(phi, 0.3, -0.2);
      auto u = [&](double x, double t) { return akhmediev(x, t, p) * std::polar(1.0, 2 * t); };
      for (double t : {-1.5, -0.3, 0.0, 0.8})
        for (double x : {-1.0, 0.0, 0.45, 1.7}) CHECK(nls_residual(u, x, t) < 1e-8);
    }
  }

  TEST_CASE("breather symmetries") {
    const auto p = BreatherParams::from_phi(kPi / 3);
    const double period = 2 * kPi / p.k;
    for (double x : {0.2, 1.1})
      for (double t : {0.3, 1.7}) {
        CHECK(std::abs(akhmediev(-x, t, p) - akhmediev(x, t, p)) < 1e-14);
        CHECK(std::abs(akhmediev(x, -t, p) - std::conj(akhmediev(x, t, p))) < 1e-14);
        CHECK(std::abs(akhmediev(x + period, t, p) - akhmediev(x, t, p)) < 1e-12);
      }
    CHECK(std::abs(akhmediev(0, 0, p)) == doctest::Approx(1 + 2 * std::sin(p.phi)));
    const cplx far = akhmediev(0.3, -40.0, p) * std::polar(1.0, 2 * p.phi);
    CHECK(std::abs(far - 1.0) < 1e-12);
  }

  TEST_CASE("peregrine solution") {
    CHECK(peregrine(0, 0).real() == doctest::Approx(-3.0));
    auto u = [](double x, double t) { return peregrine(x, t) * std::polar(1.0, 2 * t); };
    for (double x : {-0.8, 0.0, 0.3})
      for (double t : {-0.5, 0.0, 0.25}) {
        CHECK(nls_residual(u, x, t) < 1e-8);
        CHECK(std::abs(peregrine(-x, t) - peregrine(x, t)) < 1e-15);
        CHECK(std::abs(peregrine(x, -t) - std::conj(peregrine(x, t))) < 1e-15);
      }
    CHECK(std::abs(peregrine(1e4, 0) - 1.0) < 1e-7);
    CHECK(peregrine(1.0, 2.0, 1.0, 2.0) == peregrine(0, 0));
  }

  TEST_CASE("peregrine limit is monotone") {
    Window w;
    double prev = 1e9;
    for (double phi : {1.2, 1.35, 1.45, 1.5, 1.55, 1.565}) {
      const double d = peregrine_limit_check(phi, w);
      CHECK(d < prev);
      prev = d;
    }
    CHECK(peregrine_limit_check(kPi / 2 - 1e-4, w) < 1e-3);
    CHECK_THROWS_AS(peregrine_limit_check(kPi / 2, w), std::domain_error);
  }

  TEST_CASE("profiles interpolate and guard their range") {
    std::vector<double> x1(41), t1(41);
    for (int i = 0; i <= 40; ++i) {
      const double s = -2.0 + 0.1 * i;
      x1[i] = 0.5;
      t1[i] = 3 + s * s;
    }
    Q1DProfiles prof(SlowKind::planar, 1.0, -2.0, 2.0, x1, t1);
    CHECK(prof.t1(0.55) == doctest::Approx(3 + 0.55 * 0.55).epsilon(1e-4));
    CHECK(prof.t1_derivative(0.0, 2) == doctest::Approx(2.0).epsilon(1e-2));
    CHECK(prof.x1(1.3) == doctest::Approx(0.5));
    CHECK_THROWS_AS(prof.t1(2.5), std::out_of_range);
    auto undefined = std::vector<bool>(41, true);
    undefined[20] = false;
    Q1DProfiles holey(SlowKind::planar, 1.0, -2.0, 2.0, x1, t1, undefined);
    CHECK_THROWS_AS(holey.t1(0.0), std::domain_error);
    CHECK_NOTHROW(holey.t1(1.0));
    CHECK_THROWS(Q1DProfiles(SlowKind::radial, 1.0, -1.0, 1.0, x1, t1));
  }

  TEST_CASE("constant profiles reproduce the breather") {
    const auto prof = Q1DProfiles::constant(SlowKind::planar, 0.9, 0.25, 1.5, -1, 1);
    const auto p = BreatherParams::from_phi(0.9, 0.25, 1.5);
    for (double t : {0.0, 1.5, 2.0}) {
      const cplx want = akhmediev(0.7, t, p) * std::polar(1.0, 2 * t + 1.8);
      CHECK(std::abs(q1d_breather(0.7, 0.3, t, prof) - want) < 1e-12);
    }
    const auto radial = Q1DProfiles::constant(SlowKind::radial, 0.9, 0.0, 1.5, 0, 1);
    CHECK_THROWS(q1d_breather(0.0, -0.1, 1.0, radial));
  }

  TEST_CASE("fission products") {
    FissionProductParams p;
    p.phi = 1.0;
    p.sigma = 2 * std::sin(2.0);
    p.k = 2 * std::cos(1.0);
    p.t0 = 2.0;
    const double peak = 1 + 2 * std::sin(1.0);
    const double t = 4.0;
    const double y_sech = p.sigma * (t - p.t0) + std::log(2.0);
    CHECK(std::abs(fission_product_sech(0, y_sech, t, p, 1)) == doctest::Approx(peak));
    CHECK(std::abs(fission_product_sech(0, -y_sech, t, p, -1)) == doctest::Approx(peak));
    CHECK(std::abs(fission_product_sech(0.2, 1.3, t, p, 1) - fission_product_sech(0.2, -1.3, t, p, -1)) < 1e-14);
    const double y_g = std::sqrt(p.sigma * (t - p.t0));
    CHECK(std::abs(fission_product_gauss(0, y_g, t, p, 1)) == doctest::Approx(peak));
    CHECK(std::abs(fission_product_gauss(0, -y_g, t, p, -1)) == doctest::Approx(peak));
    CHECK(std::abs(fission_product_gauss(0, 0.0, t, p, 1)) < peak - 0.5);
    CHECK_THROWS(fission_product_gauss(0, 0, 1.0, p, 1));
    CHECK_THROWS(fission_product_sech(0, 0, 1.0, p, 0));
  }

  TEST_CASE("deformed peregrine") {
    PeregrineQ1DParams p;
    p.t0 = 1.0;
    p.a = 2.0;
    p.d = 0.5;
    p.delta = 1e-2;
    CHECK(p.slow_coordinate(100.0) == doctest::Approx(0.1));
    CHECK(std::abs(peregrine_q1d(0, 0, 1.0, p) - std::polar(1.0, 2.0) * -3.0) < 1e-14);
    const double s = 0.3;
    CHECK(std::abs(peregrine_q1d(p.d * s * s, s, 1.0 + p.a * s * s, p)) ==
          doctest::Approx(3.0));
    CHECK(peregrine_ring_radius(0.5, p) == 0.0);
    CHECK(peregrine_ring_radius(3.0, p) == doctest::Approx(1.0));
    p.a = 0.0;
    CHECK_THROWS(peregrine_ring_radius(2.0, p));
  }
}
