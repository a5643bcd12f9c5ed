#include <cmath>

#include <doctest.h>

#include "roguewave/core.hpp"

using namespace roguewave;

TEST_SUITE("core") {
  TEST_CASE("model names and signs") {
    CHECK(ModelSpec::nls().sign(0) == 1);
    CHECK(ModelSpec::hyperbolic2d().sign(1) == -1);
    CHECK(ModelSpec::threeD(-1, 1).sign(2) == 1);
    CHECK_THROWS_AS(ModelSpec::nls().sign(3), std::out_of_range);
    CHECK_THROWS_AS((ModelSpec{4, 1, 1}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((ModelSpec{2, 0, 1}).validate(), std::invalid_argument);
  }

  TEST_CASE("fundamental wavenumber of the standard box") {
    const auto g = make_grid({6.0}, {64});
    const double oracle = 2.0 * 3.141592653589793 / 6.0;
    CHECK(g.wavenumbers(0)[1] == doctest::Approx(oracle).epsilon(1e-15));
    CHECK(oracle == doctest::Approx(1.0472).epsilon(1e-4));
    CHECK(g.wavenumbers(0)[63] == doctest::Approx(-oracle));
    CHECK(g.wavenumbers(0)[32] == doctest::Approx(-32 * oracle));
  }

  TEST_CASE("coordinates start at -L/2") {
    const auto g = make_grid({6.0, 10.0}, {8, 10});
    CHECK(g.coords(0)[0] == doctest::Approx(-3.0));
    CHECK(g.coords(0)[6] == doctest::Approx(1.5));
    CHECK(g.coords(1)[9] == doctest::Approx(4.0));
    CHECK(g.size() == 80u);
    CHECK(g.cell_volume() == doctest::Approx(0.75 * 1.0));
  }

  TEST_CASE("flat index is x fastest and unravels") {
    const auto g = make_grid({1.0, 1.0, 1.0}, {8, 10, 12});
    CHECK(g.index(1, 0, 0) == 1u);
    CHECK(g.index(0, 1, 0) == 8u);
    CHECK(g.index(0, 0, 1) == 80u);
    const auto ijk = g.unravel(g.index(3, 5, 7));
    CHECK(ijk[0] == 3);
    CHECK(ijk[1] == 5);
    CHECK(ijk[2] == 7);
  }

  TEST_CASE("grid rejects bad input") {
    CHECK_THROWS(make_grid({1.0}, {0}));
    CHECK_THROWS(make_grid({-1.0}, {8}));
    CHECK_THROWS(make_grid({1.0, 1.0}, {8}));
    CHECK_THROWS(make_grid({1.0, 1.0, 1.0, 1.0}, {2, 2, 2, 2}));
  }

  TEST_CASE("field finiteness check") {
    ComplexField f(make_grid({1.0}, {8}));
    f[3] = {2.0, -3.0};
    CHECK(f.max_modulus() == doctest::Approx(std::sqrt(13.0)));
    CHECK_NOTHROW(f.check_finite());
    f[5] = {std::nan(""), 0.0};
    CHECK_THROWS_AS(f.check_finite(), CorruptStateError);
  }

  TEST_CASE("simulation config validation") {
    SimulationConfig c;
    c.model = ModelSpec::nls();
    c.grid = make_grid({6.0}, {32});
    c.t_end = 1.0;
    c.output_times = {0.5, 1.0};
    CHECK_NOTHROW(c.validate());
    c.dt = -1.0;
    CHECK_THROWS(c.validate());
    c.dt = 1e-3;
    c.output_times = {2.0};
    CHECK_THROWS(c.validate());
    c.output_times = {};
    c.grid = make_grid({6.0, 6.0}, {8, 8});
    CHECK_THROWS(c.validate());
    c.grid = make_grid({6.0}, {32});
    c.conservation_cadence = 0;
    CHECK_NOTHROW(c.validate());
    c.conservation_cadence = -1;
    CHECK_THROWS(c.validate());
  }

  TEST_CASE("warnings go to the installed handler") {
    std::string seen;
    set_warning_handler([&](const std::string& m) { seen = m; });
    warn("hello");
    CHECK(seen == "hello");
    set_warning_handler({});
  }
}
