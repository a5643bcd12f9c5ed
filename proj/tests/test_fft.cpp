#include <cmath>
#include <random>

#include <doctest.h>

#include "roguewave/fft.hpp"

using namespace roguewave;

TEST_SUITE("fft") {
  TEST_CASE("forward matches a direct DFT") {
    const int n = 12;
    std::mt19937 rng(3);
    std::normal_distribution<double> g;
    std::vector<cplx> v(n), ref(n);
    for (auto& x : v) x = {g(rng), g(rng)};
    for (int k = 0; k < n; ++k) {
      cplx s = 0.0;
      for (int j = 0; j < n; ++j) s += v[j] * std::polar(1.0, -2.0 * kPi * j * k / n);
      ref[k] = s;
    }
    FftPlan p(n);
    p.forward(v);
    for (int k = 0; k < n; ++k) CHECK(std::abs(v[k] - ref[k]) < 1e-12);
  }

  TEST_CASE("inverse undoes forward on a 3-axis grid") {
    const auto grid = make_grid({1.0, 2.0, 3.0}, {8, 10, 12});
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<cplx> v(grid.size());
    for (auto& x : v) x = {u(rng), u(rng)};
    const auto orig = v;
    FftPlan p(grid);
    p.forward(v);
    p.inverse(v);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(v[i] - orig[i]) < 1e-14);
  }

  TEST_CASE("spectral derivatives of trigonometric data") {
    const int n = 32;
    const double L = 5.0, k = 2.0 * kPi / L * 3;
    std::vector<double> f(n);
    std::vector<cplx> c(n);
    for (int j = 0; j < n; ++j) {
      const double x = -L / 2 + j * L / n;
      f[j] = std::sin(k * x);
      c[j] = std::polar(1.0, k * x);
    }
    const auto d1 = spectral_derivative(f, L, 1);
    const auto d2 = spectral_derivative(f, L, 2);
    const auto c2 = spectral_second_derivative(c, L);
    for (int j = 0; j < n; ++j) {
      const double x = -L / 2 + j * L / n;
      CHECK(d1[j] == doctest::Approx(k * std::cos(k * x)).epsilon(1e-10).scale(k));
      CHECK(d2[j] == doctest::Approx(-k * k * std::sin(k * x)).epsilon(1e-10).scale(k * k));
      CHECK(std::abs(c2[j] + k * k * c[j]) < 1e-10 * k * k);
    }
    CHECK_THROWS(spectral_derivative(f, L, 3));
  }
}
