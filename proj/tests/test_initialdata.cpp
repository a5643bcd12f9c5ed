#include <cmath>

#include <doctest.h>

#include "roguewave/initialdata.hpp"

using namespace roguewave;
using namespace roguewave::initialdata;

namespace {

mae::CauchyData fig1() {
  mae::CauchyData d;
  d.epsilon = 1e-2;
  d.delta = 1e-2;
  d.Lx = 6.0;
  d.c0_plus = {0.5, 0};
  d.c0_minus = {0.5, 0};
  d.envelope.family = mae::EnvelopeFamily::gaussian;
  return d;
}

}  // namespace

TEST_SUITE("initialdata") {
  TEST_CASE("planar datum matches its definition") {
    auto d = fig1();
    d.c0_minus = {0.1, 0.3};
    d.envelope.d = 0.2;
    const auto g = make_grid({6.0, 1000.0}, {16, 32});
    const auto u = build_planar(d, g);
    for (int j : {0, 9, 16})
      for (int i : {0, 5, 11}) {
        const double x = g.coords(0)[i], Y = d.delta * g.coords(1)[j];
        const double f = std::exp(-Y * Y), gY = 0.2 * Y * Y;
        const double k = 2 * 3.141592653589793 / 6;
        const cplx want = 1.0 + 1e-2 * (cplx{0.5, 0} * f * std::polar(1.0, k * x - gY) +
                                        cplx{0.1, 0.3} * f * std::polar(1.0, -k * x + gY));
        CHECK(std::abs(u.at(i, j) - want) < 1e-15);
      }
  }

  TEST_CASE("fig1 datum peak deviation equals epsilon") {
    const auto g = make_grid({6.0, 1000.0}, {64, 128});
    const auto u = build_planar(fig1(), g);
    double m = 0;
    for (const auto& v : u.values) m = std::max(m, std::abs(v - 1.0));
    CHECK(m == doctest::Approx(1e-2).epsilon(1e-12));
    CHECK(std::abs(u.at(32, 64) - 1.0) == doctest::Approx(1e-2).epsilon(1e-12));
  }

  TEST_CASE("planar datum is uniform along z") {
    const auto g = make_grid({6.0, 1000.0, 50.0}, {8, 16, 8});
    const auto u = build_planar(fig1(), g);
    CHECK(u.at(3, 5, 0) == u.at(3, 5, 7));
  }

  TEST_CASE("planar grid checks") {
    CHECK_THROWS(build_planar(fig1(), make_grid({5.0, 1000.0}, {16, 16})));
    auto d = fig1();
    d.delta = 1e-3;
    d.envelope.family = mae::EnvelopeFamily::cosine;
    d.envelope.L_Y = 10.0;
    CHECK_NOTHROW(build_planar(d, make_grid({6.0, 20000.0}, {16, 16})));
    CHECK_THROWS(build_planar(d, make_grid({6.0, 15000.0}, {16, 16})));
  }

  TEST_CASE("radial datum") {
    const auto g = make_grid({6.0, 1000.0, 1000.0}, {8, 16, 16});
    const auto u = build_radial(fig1(), g);
    for (int j = 1; j < 16; ++j)
      for (int k = 1; k < 16; ++k) {
        CHECK(u.at(2, j, k) == u.at(2, k, j));
        CHECK(u.at(2, j, k) == u.at(2, 16 - j, k));
      }
    const double R = fig1().delta * std::hypot(g.coords(1)[4], g.coords(2)[9]);
    const cplx want = 1.0 + 1e-2 * std::exp(-R * R) * std::cos(2 * 3.141592653589793 / 6 * g.coords(0)[2]);
    CHECK(std::abs(u.at(2, 4, 9) - want) < 1e-15);
    CHECK_THROWS(build_radial(fig1(), make_grid({6.0, 200.0, 200.0}, {8, 16, 16})));
    CHECK_THROWS(build_radial(fig1(), make_grid({6.0, 1000.0}, {8, 16})));
  }

  TEST_CASE("doubly periodic phase") {
    const double pi = 3.141592653589793;
    const double kx = 2 * pi / 4, ky = 2 * pi / 10;
    const double phi = doubly_periodic_phi(kx, ky);
    CHECK(phi == doctest::Approx(std::acos(std::sqrt(kx * kx - ky * ky) / 2)).epsilon(1e-15));
    CHECK(std::abs(phi - 0.770) < 5e-3);
    CHECK(std::isnan(doubly_periodic_phi(2 * pi / 4, 2 * pi / 2)));
    CHECK(std::isnan(doubly_periodic_phi(2 * pi / 2.5, 2 * pi / 10)));
    CHECK(!std::isnan(doubly_periodic_phi(2 * pi / 4, 2 * pi / 10, 1)));
    CHECK(std::isnan(doubly_periodic_phi(2 * pi / 4, 2 * pi / 2, 1)));
  }

  TEST_CASE("doubly periodic datum") {
    const double pi = 3.141592653589793;
    const double kx = 2 * pi / 4, ky = 2 * pi / 10;
    const auto g = make_grid({4.0, 10.0}, {16, 16});
    const auto u = build_doubly_periodic(1e-2, kx, ky, g);
    const double phi = doubly_periodic_phi(kx, ky);
    const cplx want = 1.0 + 1e-2 * std::polar(1.0, phi) * std::cos(kx * g.coords(0)[3]) * std::cos(ky * g.coords(1)[7]);
    CHECK(std::abs(u.at(3, 7) - want) < 1e-15);
    CHECK_THROWS(build_doubly_periodic(1e-2, kx, ky, make_grid({4.5, 10.0}, {16, 16})));
    int warnings = 0;
    set_warning_handler([&](const std::string&) { ++warnings; });
    CHECK_NOTHROW(build_doubly_periodic(1e-2, 2 * pi / 4, 2 * pi / 2, make_grid({4.0, 2.0}, {16, 16})));
    set_warning_handler({});
    CHECK(warnings == 1);
  }
}
