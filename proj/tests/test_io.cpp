#include <cstring>
#include <fstream>
#include <random>

#include <unistd.h>

#include <doctest.h>

#include "roguewave/initialdata.hpp"
#include "roguewave/io.hpp"

using namespace roguewave;
using namespace roguewave::io;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("roguewave_io_" + std::to_string(::getpid())) / name;
  fs::create_directories(p);
  return p;
}

fs::path config_path(const std::string& name) { return fs::path(RW_SOURCE_DIR) / "configs" / name; }

json fig1_json() {
  std::ifstream in(config_path("fig1.json"));
  return json::parse(in);
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("bundled configs load and round trip") {
    for (const char* name : {"fig1.json", "fig2.json", "fig2_enls.json", "fig4.json", "fig6.json", "limit.json"}) {
      CAPTURE(name);
      const auto cfg = load_config(config_path(name));
      const auto again = parse_config(emit_config(cfg));
      CHECK(again == cfg);
      CHECK(emit_config(again) == emit_config(cfg));
    }
  }

  TEST_CASE("fig1 and fig2 configs describe the documented experiments") {
    const auto f1 = load_config(config_path("fig1.json"));
    CHECK(f1.model.eta1 == -1);
    CHECK(f1.cauchy.envelope.family == mae::EnvelopeFamily::gaussian);
    CHECK(f1.cauchy.epsilon == 1e-2);
    CHECK(f1.cauchy.delta == 1e-2);
    CHECK(f1.cauchy.Lx == 6.0);
    CHECK(f1.cauchy.c0_plus == cplx{0.5, 0});
    const auto f2 = load_config(config_path("fig2.json"));
    CHECK(f2.cauchy.c0_minus == cplx{0.3, 0.1});
    CHECK(f2.cauchy.c0_plus == cplx{0.084, 0});
    CHECK(f2.cauchy.envelope.gamma == 0.3);
    CHECK(f2.cauchy.envelope.L_Y == 10.0);
    CHECK(f2.cauchy.delta == 1e-3);
    CHECK(f2.grid().length(1) == doctest::Approx(1e4));
    const auto sim = f2.simulation();
    CHECK(sim.output_times.front() == doctest::Approx(3.0));
    CHECK(sim.output_times.back() == doctest::Approx(4.3));
    CHECK(sim.output_times.size() == 131);
  }

  TEST_CASE("validation errors name the field") {
    auto j = fig1_json();
    j["datum"]["epsilon"] = -1;
    try {
      parse_config(j);
      FAIL("expected a configuration error");
    } catch (const ConfigError& e) {
      CHECK(e.path() == "datum.epsilon");
    }
    j = fig1_json();
    j["datum"]["Lx"] = 7.0;
    CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("datum.Lx"), ConfigError);
    j = fig1_json();
    j["model"]["eta1"] = 2;
    CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("model"), ConfigError);
    j = fig1_json();
    j["datum"]["c0_plus"] = "half";
    CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("datum.c0_plus"), ConfigError);
    j = fig1_json();
    j["grid"]["counts"] = {64};
    CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("grid.counts"), ConfigError);
    j = fig1_json();
    j.erase("model");
    CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("model"), ConfigError);
    j = fig1_json();
    j["datum"]["envelope"]["family"] = "triangle";
    CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("datum.envelope.family"), ConfigError);
    const auto bad = scratch("cfg") / "broken.json";
    std::ofstream(bad) << "{ not json";
    CHECK_THROWS_AS(load_config(bad), ConfigError);
    CHECK_THROWS_AS(load_config(scratch("cfg") / "missing.json"), ConfigError);
  }

  TEST_CASE("snapshot round trip is bit exact") {
    std::mt19937 rng(9);
    std::normal_distribution<double> n;
    const auto g = make_grid({6.0, 1000.0}, {64, 128});
    ComplexField f(g, 3.3829);
    for (auto& v : f.values) v = {n(rng), n(rng)};
    f[0] = {-0.0, 1e-310};
    const auto stem = scratch("snap") / "s0";
    write_snapshot(f, stem, {2, -1, 1});
    const auto h = read_snapshot_header(stem);
    CHECK(h["payload_bytes"].get<std::size_t>() == 64u * 128u * 16u);
    CHECK(fs::file_size(snapshot_paths(stem).payload) == 64u * 128u * 16u);
    CHECK(h["endianness"] == "little");
    CHECK(h["version"] == kSnapshotVersion);
    const auto r = read_snapshot(stem);
    CHECK(r.grid == g);
    CHECK(bit_equal(r.time, f.time));
    bool same = true;
    for (std::size_t i = 0; i < f.values.size(); ++i)
      same = same && bit_equal(r[i].real(), f[i].real()) && bit_equal(r[i].imag(), f[i].imag());
    CHECK(same);
  }

  TEST_CASE("snapshot header mismatches are rejected") {
    const auto g = make_grid({1.0}, {8});
    ComplexField f(g);
    const auto stem = scratch("snap") / "bad";
    write_snapshot(f, stem);
    auto h = read_snapshot_header(stem);
    h["version"] = 99;
    write_json(snapshot_paths(stem).header, h);
    CHECK_THROWS(read_snapshot(stem));
    write_snapshot(f, stem);
    fs::resize_file(snapshot_paths(stem).payload, 100);
    CHECK_THROWS(read_snapshot(stem));
  }

  TEST_CASE("sparse snapshots keep points above the level") {
    const auto g = make_grid({1.0, 1.0, 1.0}, {8, 8, 8});
    ComplexField f(g, 3.4);
    for (std::size_t i = 0; i < f.values.size(); ++i) f[i] = (i % 7 == 0) ? cplx{2.5, 0.1} : cplx{1.0, 0.0};
    const auto stem = scratch("snap") / "sparse";
    write_sparse_snapshot(f, 2.2, stem);
    const auto s = read_sparse_snapshot(stem);
    CHECK(s.grid == g);
    CHECK(s.level == 2.2);
    CHECK(s.time == 3.4);
    CHECK(s.indices.size() == (f.values.size() + 6) / 7);
    for (std::size_t n = 0; n < s.indices.size(); ++n) CHECK(s.values[n] == f[s.indices[n]]);
    CHECK(fs::file_size(snapshot_paths(stem).payload) == 24u * s.indices.size());
    CHECK_THROWS(read_snapshot(stem));
  }

  TEST_CASE("csv, hash and manifest") {
    const auto dir = scratch("out");
    write_csv(dir / "a.csv", {"t", "d"}, {{0.1, 1.0 / 3.0}});
    std::ifstream in(dir / "a.csv");
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "t,d");
    CHECK(std::stod(row.substr(row.find(',') + 1)) == 1.0 / 3.0);
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    Manifest m;
    m.command = "predict";
    m.config_text = "abc";
    m.timings["load"] = 0.5;
    write_manifest(dir, m);
    std::ifstream mi(dir / "manifest.json");
    const auto j = json::parse(mi);
    CHECK(j["config_sha256"] == sha256_hex("abc"));
    CHECK(j["timings_seconds"]["load"] == 0.5);
    CHECK(j.contains("versions"));
  }

  TEST_CASE("prediction report") {
    const auto cfg = load_config(config_path("fig2.json"));
    const auto p = mae::predict_events(cfg.cauchy, cfg.slow_domain());
    const auto j = prediction_to_json(p);
    CHECK(j["t0"].get<double>() == doctest::Approx(3.382910346441882).epsilon(1e-12));
    CHECK(j.contains("events"));
    CHECK(j["phi1_assumed_equal_phi"] == true);
  }

  TEST_CASE("initial field from config") {
    const auto cfg = load_config(config_path("fig6.json"));
    const auto u = build_initial(cfg);
    CHECK(u.grid.length(0) == 4.0);
    CHECK(u.grid.length(1) == 10.0);
    const double phi = initialdata::doubly_periodic_phi(2 * kPi / 4, 2 * kPi / 10);
    CHECK(u.max_modulus() == doctest::Approx(std::abs(1.0 + 1e-2 * std::polar(1.0, phi))).epsilon(1e-12));
  }
}
