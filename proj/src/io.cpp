#include "roguewave/io.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "roguewave/initialdata.hpp"

namespace roguewave::io {

namespace {

std::string join(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }

const json& require(const json& j, const std::string& path, const std::string& key) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(join(path, key), "missing required field");
  return *it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  return v.get<int>();
}

cplx as_complex(const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw ConfigError(path, "expected a number or a [re, im] pair");
}

std::vector<double> as_reals(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

double opt_number(const json& j, const std::string& path, const std::string& key, double dflt) {
  auto it = j.find(key);
  return it == j.end() ? dflt : as_number(*it, join(path, key));
}

int opt_int(const json& j, const std::string& path, const std::string& key, int dflt) {
  auto it = j.find(key);
  return it == j.end() ? dflt : as_int(*it, join(path, key));
}

bool opt_bool(const json& j, const std::string& path, const std::string& key, bool dflt) {
  auto it = j.find(key);
  if (it == j.end()) return dflt;
  if (!it->is_boolean()) throw ConfigError(join(path, key), "expected a boolean");
  return it->get<bool>();
}

std::string opt_string(const json& j, const std::string& path, const std::string& key, const std::string& dflt) {
  auto it = j.find(key);
  if (it == j.end()) return dflt;
  if (!it->is_string()) throw ConfigError(join(path, key), "expected a string");
  return it->get<std::string>();
}

json complex_json(cplx c) { return json::array({c.real(), c.imag()}); }

// Runs a validator and re-raises its std::invalid_argument with a field path.
template <class F>
void at_path(const std::string& path, F&& f) {
  try {
    f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    std::string msg = e.what();
    // Messages of the form "field: ..." name a sub-field.
    const auto colon = msg.find(": ");
    const auto space = msg.find(' ');
    if (colon != std::string::npos && colon < space) throw ConfigError(join(path, msg.substr(0, colon)), msg.substr(colon + 2));
    throw ConfigError(path, msg);
  }
}

mae::EnvelopeSpec parse_envelope(const json& j, const std::string& path) {
  mae::EnvelopeSpec e;
  try {
    e.family = mae::envelope_family_from_string(opt_string(j, path, "family", "gaussian"));
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(join(path, "family"), ex.what());
  }
  e.gamma = opt_number(j, path, "gamma", e.gamma);
  e.L_Y = opt_number(j, path, "L_Y", e.L_Y);
  e.d = opt_number(j, path, "d", e.d);
  e.kappa = opt_number(j, path, "kappa", e.kappa);
  if (j.contains("Y")) e.tab_Y = as_reals(j["Y"], join(path, "Y"));
  if (j.contains("f")) e.tab_f = as_reals(j["f"], join(path, "f"));
  if (j.contains("g")) e.tab_g = as_reals(j["g"], join(path, "g"));
  return e;
}

json emit_envelope(const mae::EnvelopeSpec& e) {
  json j{{"family", mae::to_string(e.family)}, {"gamma", e.gamma}, {"L_Y", e.L_Y}, {"d", e.d}, {"kappa", e.kappa}};
  if (!e.tab_Y.empty()) j["Y"] = e.tab_Y;
  if (!e.tab_f.empty()) j["f"] = e.tab_f;
  if (!e.tab_g.empty()) j["g"] = e.tab_g;
  return j;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("", "configuration root must be an object");
  ExperimentConfig c;
  c.name = opt_string(j, "", "name", c.name);
  c.output_dir = opt_string(j, "", "output_dir", c.output_dir);

  const auto& m = require(j, "", "model");
  c.model.dim = as_int(require(m, "model", "dim"), "model.dim");
  c.model.eta1 = opt_int(m, "model", "eta1", 1);
  c.model.eta2 = opt_int(m, "model", "eta2", 1);

  const auto& d = require(j, "", "datum");
  const std::string kind = opt_string(d, "datum", "kind", "cauchy");
  if (kind == "cauchy") {
    c.datum = DatumKind::cauchy;
    const std::string geo = opt_string(d, "datum", "geometry", "planar");
    if (geo == "planar") c.geometry = Geometry::planar;
    else if (geo == "radial") c.geometry = Geometry::radial;
    else throw ConfigError("datum.geometry", "expected 'planar' or 'radial'");
    auto& cd = c.cauchy;
    cd.epsilon = as_number(require(d, "datum", "epsilon"), "datum.epsilon");
    cd.delta = opt_number(d, "datum", "delta", cd.delta);
    cd.Lx = as_number(require(d, "datum", "Lx"), "datum.Lx");
    cd.c0_plus = as_complex(require(d, "datum", "c0_plus"), "datum.c0_plus");
    cd.c0_minus = as_complex(require(d, "datum", "c0_minus"), "datum.c0_minus");
    cd.envelope = parse_envelope(require(d, "datum", "envelope"), "datum.envelope");
    if (d.contains("stable_modes")) {
      const auto& sm = d["stable_modes"];
      if (!sm.is_array()) throw ConfigError("datum.stable_modes", "expected an array");
      for (std::size_t i = 0; i < sm.size(); ++i) {
        const std::string p = "datum.stable_modes[" + std::to_string(i) + "]";
        cd.stable_modes.push_back({as_int(require(sm[i], p, "harmonic"), p + ".harmonic"),
                                   as_complex(require(sm[i], p, "coefficient"), p + ".coefficient")});
      }
    }
  } else if (kind == "doubly_periodic") {
    c.datum = DatumKind::doubly_periodic;
    c.dp_epsilon = as_number(require(d, "datum", "epsilon"), "datum.epsilon");
    c.dp_Lx = as_number(require(d, "datum", "Lx"), "datum.Lx");
    c.dp_Ly = as_number(require(d, "datum", "Ly"), "datum.Ly");
  } else {
    throw ConfigError("datum.kind", "expected 'cauchy' or 'doubly_periodic'");
  }

  if (j.contains("grid")) {
    const auto& g = j["grid"];
    if (g.contains("lengths")) c.lengths = as_reals(g["lengths"], "grid.lengths");
    const auto& counts = require(g, "grid", "counts");
    if (!counts.is_array()) throw ConfigError("grid.counts", "expected an array of integers");
    for (std::size_t i = 0; i < counts.size(); ++i)
      c.counts.push_back(as_int(counts[i], "grid.counts[" + std::to_string(i) + "]"));
  }

  if (j.contains("solver")) {
    const auto& s = j["solver"];
    auto& ss = c.solver;
    ss.dt = opt_number(s, "solver", "dt", ss.dt);
    ss.t_end = opt_number(s, "solver", "t_end", ss.t_end);
    if (s.contains("output_times")) ss.output_times = as_reals(s["output_times"], "solver.output_times");
    ss.output_every = opt_number(s, "solver", "output_every", ss.output_every);
    ss.output_from = opt_number(s, "solver", "output_from", ss.output_from);
    ss.conservation_cadence = opt_int(s, "solver", "conservation_cadence", ss.conservation_cadence);
    ss.dealias = opt_bool(s, "solver", "dealias", ss.dealias);
  }
  if (j.contains("diagnostics")) {
    const auto& s = j["diagnostics"];
    auto& ds = c.diagnostics;
    ds.threshold = opt_number(s, "diagnostics", "threshold", ds.threshold);
    ds.compare_from = opt_number(s, "diagnostics", "compare_from", ds.compare_from);
    ds.compare_to = opt_number(s, "diagnostics", "compare_to", ds.compare_to);
    ds.persistence = opt_int(s, "diagnostics", "persistence", ds.persistence);
  }
  if (j.contains("scan")) {
    const auto& s = j["scan"];
    ScanSettings sc;
    const auto& boxes = require(s, "scan", "boxes");
    if (!boxes.is_array()) throw ConfigError("scan.boxes", "expected an array of [Lx, Ly] pairs");
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      const auto v = as_reals(boxes[i], "scan.boxes[" + std::to_string(i) + "]");
      if (v.size() != 2) throw ConfigError("scan.boxes[" + std::to_string(i) + "]", "expected [Lx, Ly]");
      sc.boxes.emplace_back(v[0], v[1]);
    }
    sc.epsilon = opt_number(s, "scan", "epsilon", sc.epsilon);
    sc.t_max = opt_number(s, "scan", "t_max", sc.t_max);
    sc.nx = opt_int(s, "scan", "nx", sc.nx);
    sc.ny = opt_int(s, "scan", "ny", sc.ny);
    sc.cadence = opt_number(s, "scan", "cadence", sc.cadence);
    sc.persistence = opt_int(s, "scan", "persistence", sc.persistence);
    c.scan = sc;
  }
  if (j.contains("limit")) {
    const auto& s = j["limit"];
    LimitSettings ls;
    ls.phis = as_reals(require(s, "limit", "phis"), "limit.phis");
    if (s.contains("window")) {
      const auto& w = s["window"];
      ls.window.x_min = opt_number(w, "limit.window", "x_min", ls.window.x_min);
      ls.window.x_max = opt_number(w, "limit.window", "x_max", ls.window.x_max);
      ls.window.t_min = opt_number(w, "limit.window", "t_min", ls.window.t_min);
      ls.window.t_max = opt_number(w, "limit.window", "t_max", ls.window.t_max);
      ls.window.nx = opt_int(w, "limit.window", "nx", ls.window.nx);
      ls.window.nt = opt_int(w, "limit.window", "nt", ls.window.nt);
    }
    c.limit = ls;
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    c.output.snapshots = opt_bool(o, "output", "snapshots", c.output.snapshots);
    if (o.contains("sparse_level") && !o["sparse_level"].is_null())
      c.output.sparse_level = as_number(o["sparse_level"], "output.sparse_level");
  }
  c.validate();
  return c;
}

json emit_config(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["output_dir"] = c.output_dir;
  j["model"] = {{"dim", c.model.dim}, {"eta1", c.model.eta1}, {"eta2", c.model.eta2}};
  if (c.datum == DatumKind::cauchy) {
    const auto& cd = c.cauchy;
    json sm = json::array();
    for (const auto& s : cd.stable_modes) sm.push_back({{"harmonic", s.harmonic}, {"coefficient", complex_json(s.coefficient)}});
    j["datum"] = {{"kind", "cauchy"},
                  {"geometry", c.geometry == Geometry::planar ? "planar" : "radial"},
                  {"epsilon", cd.epsilon},
                  {"delta", cd.delta},
                  {"Lx", cd.Lx},
                  {"c0_plus", complex_json(cd.c0_plus)},
                  {"c0_minus", complex_json(cd.c0_minus)},
                  {"envelope", emit_envelope(cd.envelope)},
                  {"stable_modes", sm}};
  } else {
    j["datum"] = {{"kind", "doubly_periodic"}, {"epsilon", c.dp_epsilon}, {"Lx", c.dp_Lx}, {"Ly", c.dp_Ly}};
  }
  j["grid"] = {{"counts", c.counts}};
  if (!c.lengths.empty()) j["grid"]["lengths"] = c.lengths;
  const auto& s = c.solver;
  j["solver"] = {{"dt", s.dt},
                 {"t_end", s.t_end},
                 {"output_times", s.output_times},
                 {"output_every", s.output_every},
                 {"output_from", s.output_from},
                 {"conservation_cadence", s.conservation_cadence},
                 {"dealias", s.dealias}};
  const auto& d = c.diagnostics;
  j["diagnostics"] = {{"threshold", d.threshold},
                      {"compare_from", d.compare_from},
                      {"compare_to", d.compare_to},
                      {"persistence", d.persistence}};
  if (c.scan) {
    json boxes = json::array();
    for (const auto& [lx, ly] : c.scan->boxes) boxes.push_back({lx, ly});
    j["scan"] = {{"boxes", boxes},         {"epsilon", c.scan->epsilon}, {"t_max", c.scan->t_max},
                 {"nx", c.scan->nx},       {"ny", c.scan->ny},           {"cadence", c.scan->cadence},
                 {"persistence", c.scan->persistence}};
  }
  if (c.limit) {
    const auto& w = c.limit->window;
    j["limit"] = {{"phis", c.limit->phis},
                  {"window",
                   {{"x_min", w.x_min}, {"x_max", w.x_max}, {"t_min", w.t_min}, {"t_max", w.t_max}, {"nx", w.nx}, {"nt", w.nt}}}};
  }
  j["output"] = {{"snapshots", c.output.snapshots}};
  j["output"]["sparse_level"] = c.output.sparse_level ? json(*c.output.sparse_level) : json(nullptr);
  return j;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open configuration file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", "JSON parse error in " + path.string() + ": " + e.what());
  }
  return parse_config(j);
}

PeriodicGrid ExperimentConfig::grid() const {
  std::vector<double> L = lengths;
  if (L.empty()) {
    if (datum == DatumKind::doubly_periodic) {
      L = {dp_Lx, dp_Ly};
    } else {
      L.push_back(cauchy.Lx);
      if (model.dim >= 2) {
        const auto& e = cauchy.envelope;
        const double span = e.periodic() ? e.L_Y : 2.0 * e.default_extent();
        L.push_back(span / cauchy.delta);
      }
      if (model.dim == 3) L.push_back(L[1]);
    }
  }
  return make_grid(L, counts);
}

SimulationConfig ExperimentConfig::simulation() const {
  SimulationConfig s;
  s.model = model;
  s.grid = grid();
  s.dt = solver.dt;
  s.t_end = solver.t_end;
  s.conservation_cadence = solver.conservation_cadence;
  s.dealias = solver.dealias;
  std::vector<double> t = solver.output_times;
  if (solver.output_every > 0.0) {
    const long n = static_cast<long>(std::floor((solver.t_end - solver.output_from) / solver.output_every + 1e-9));
    for (long i = 0; i <= n; ++i) t.push_back(solver.output_from + i * solver.output_every);
  }
  for (auto& v : t) v = std::min(v, solver.t_end);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }), t.end());
  s.output_times = std::move(t);
  return s;
}

mae::SlowDomain ExperimentConfig::slow_domain() const {
  const auto kind = geometry == Geometry::radial ? analytic::SlowKind::radial : analytic::SlowKind::planar;
  if (model.dim < 2) {
    mae::SlowDomain d;
    d.kind = kind;
    return d;
  }
  return diagnostics::covering_domain(grid(), cauchy.delta, kind);
}

void ExperimentConfig::validate() const {
  at_path("model", [&] { model.validate(); });
  if (datum == DatumKind::cauchy) {
    at_path("datum", [&] { (void)cauchy.validate(); });
    if (geometry == Geometry::radial && model.dim != 3) throw ConfigError("datum.geometry", "radial data need model.dim = 3");
  } else {
    if (!(dp_epsilon >= 0.0)) throw ConfigError("datum.epsilon", "must be non-negative");
    if (!(dp_Lx > 0.0)) throw ConfigError("datum.Lx", "must be positive");
    if (!(dp_Ly > 0.0)) throw ConfigError("datum.Ly", "must be positive");
    if (model.dim != 2) throw ConfigError("model.dim", "doubly periodic data need a 2-dimensional model");
  }
  if (counts.size() != static_cast<std::size_t>(model.dim))
    throw ConfigError("grid.counts", "needs one entry per model dimension");
  if (!lengths.empty() && lengths.size() != counts.size())
    throw ConfigError("grid.lengths", "needs one entry per model dimension");
  at_path("grid", [&] { (void)grid(); });
  if (!(solver.dt > 0.0)) throw ConfigError("solver.dt", "must be positive");
  if (!(solver.t_end > 0.0)) throw ConfigError("solver.t_end", "must be positive");
  if (solver.output_every < 0.0) throw ConfigError("solver.output_every", "must be non-negative");
  at_path("solver", [&] { simulation().validate(); });
  if (!(diagnostics.threshold > 1.0)) throw ConfigError("diagnostics.threshold", "must exceed the background modulus 1");
  if (diagnostics.persistence < 1) throw ConfigError("diagnostics.persistence", "must be at least 1");
  if (scan) {
    for (std::size_t i = 0; i < scan->boxes.size(); ++i)
      if (!(scan->boxes[i].first > 0.0 && scan->boxes[i].second > 0.0))
        throw ConfigError("scan.boxes[" + std::to_string(i) + "]", "box lengths must be positive");
    if (!(scan->epsilon > 0.0)) throw ConfigError("scan.epsilon", "must be positive");
    if (!(scan->t_max > 0.0)) throw ConfigError("scan.t_max", "must be positive");
    if (scan->nx < 8 || scan->ny < 8) throw ConfigError("scan.nx", "scan grids need at least 8 points per axis");
    if (!(scan->cadence > 0.0)) throw ConfigError("scan.cadence", "must be positive");
    if (scan->persistence < 1) throw ConfigError("scan.persistence", "must be at least 1");
  }
  if (limit) {
    for (std::size_t i = 0; i < limit->phis.size(); ++i)
      if (!(limit->phis[i] > 0.0 && limit->phis[i] < kPi / 2))
        throw ConfigError("limit.phis[" + std::to_string(i) + "]", "must lie in (0, pi/2)");
  }
}

ComplexField build_initial(const ExperimentConfig& cfg) {
  const auto grid = cfg.grid();
  if (cfg.datum == DatumKind::doubly_periodic)
    return initialdata::build_doubly_periodic(cfg.dp_epsilon, 2.0 * kPi / cfg.dp_Lx, 2.0 * kPi / cfg.dp_Ly, grid,
                                              cfg.model.eta1);
  if (cfg.geometry == Geometry::radial) return initialdata::build_radial(cfg.cauchy, grid);
  return initialdata::build_planar(cfg.cauchy, grid);
}

// ---------------------------------------------------------------------------
// Binary helpers

namespace {

template <class T>
void put_le(std::ostream& os, T v) {
  static_assert(sizeof(T) == 8);
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  os.write(reinterpret_cast<const char*>(&bits), 8);
}

template <class T>
T get_le(const char* p) {
  std::uint64_t bits;
  std::memcpy(&bits, p, 8);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  T v;
  std::memcpy(&v, &bits, 8);
  return v;
}

json grid_header(const ComplexField& f, const ModelSpec& model) {
  return {{"format", "roguewave-snapshot"},
          {"version", kSnapshotVersion},
          {"endianness", "little"},
          {"dtype", "complex128"},
          {"layout", "x-fastest"},
          {"dim", f.grid.dim()},
          {"lengths", f.grid.lengths()},
          {"counts", f.grid.counts()},
          {"time", f.time},
          {"model", {{"dim", model.dim}, {"eta1", model.eta1}, {"eta2", model.eta2}}}};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PeriodicGrid header_grid(const json& h) {
  return make_grid(h.at("lengths").get<std::vector<double>>(), h.at("counts").get<std::vector<int>>());
}

void check_header(const json& h, bool sparse) {
  if (h.value("format", "") != "roguewave-snapshot") throw std::runtime_error("snapshot header: unknown format");
  if (h.value("version", -1) != kSnapshotVersion)
    throw std::runtime_error("snapshot header: version " + std::to_string(h.value("version", -1)) +
                             " does not match supported version " + std::to_string(kSnapshotVersion));
  if (h.value("endianness", "") != "little") throw std::runtime_error("snapshot header: unsupported endianness");
  if (h.value("sparse", false) != sparse)
    throw std::runtime_error(sparse ? "snapshot is dense, expected sparse" : "snapshot is sparse, expected dense");
}

}  // namespace

SnapshotPaths snapshot_paths(const fs::path& stem) {
  fs::path h = stem, b = stem;
  h += ".json";
  b += ".bin";
  return {h, b};
}

void write_snapshot(const ComplexField& field, const fs::path& stem, const ModelSpec& model) {
  field.check_finite();
  const auto p = snapshot_paths(stem);
  if (p.header.has_parent_path()) fs::create_directories(p.header.parent_path());
  json h = grid_header(field, model);
  h["sparse"] = false;
  h["payload"] = p.payload.filename().string();
  h["payload_bytes"] = field.values.size() * 16;
  {
    std::ofstream os(p.payload, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + p.payload.string());
    for (const auto& v : field.values) {
      put_le(os, v.real());
      put_le(os, v.imag());
    }
  }
  write_json(p.header, h);
}

json read_snapshot_header(const fs::path& stem) {
  const auto p = snapshot_paths(stem);
  try {
    return json::parse(read_file(p.header));
  } catch (const json::parse_error& e) {
    throw std::runtime_error("snapshot header " + p.header.string() + ": " + e.what());
  }
}

ComplexField read_snapshot(const fs::path& stem) {
  const auto h = read_snapshot_header(stem);
  check_header(h, false);
  ComplexField f(header_grid(h), h.at("time").get<double>());
  const auto bytes = read_file(snapshot_paths(stem).payload);
  const std::size_t expected = f.values.size() * 16;
  if (bytes.size() != expected || h.at("payload_bytes").get<std::size_t>() != expected)
    throw std::runtime_error("snapshot payload size " + std::to_string(bytes.size()) + " does not match header (" +
                             std::to_string(expected) + " bytes)");
  for (std::size_t i = 0; i < f.values.size(); ++i)
    f.values[i] = {get_le<double>(bytes.data() + 16 * i), get_le<double>(bytes.data() + 16 * i + 8)};
  return f;
}

void write_sparse_snapshot(const ComplexField& field, double level, const fs::path& stem, const ModelSpec& model) {
  field.check_finite();
  const auto p = snapshot_paths(stem);
  if (p.header.has_parent_path()) fs::create_directories(p.header.parent_path());
  std::uint64_t n = 0;
  {
    std::ofstream os(p.payload, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + p.payload.string());
    for (std::size_t i = 0; i < field.values.size(); ++i) {
      if (!(std::abs(field.values[i]) > level)) continue;
      put_le(os, static_cast<std::uint64_t>(i));
      put_le(os, field.values[i].real());
      put_le(os, field.values[i].imag());
      ++n;
    }
  }
  json h = grid_header(field, model);
  h["sparse"] = true;
  h["level"] = level;
  h["entries"] = n;
  h["record"] = "uint64 index, float64 re, float64 im";
  h["payload"] = p.payload.filename().string();
  h["payload_bytes"] = n * 24;
  write_json(p.header, h);
}

SparseSnapshot read_sparse_snapshot(const fs::path& stem) {
  const auto h = read_snapshot_header(stem);
  check_header(h, true);
  SparseSnapshot s;
  s.grid = header_grid(h);
  s.time = h.at("time").get<double>();
  s.level = h.at("level").get<double>();
  const auto n = h.at("entries").get<std::uint64_t>();
  const auto bytes = read_file(snapshot_paths(stem).payload);
  if (bytes.size() != n * 24) throw std::runtime_error("sparse snapshot payload size does not match header");
  for (std::uint64_t i = 0; i < n; ++i) {
    const char* r = bytes.data() + 24 * i;
    const auto idx = get_le<std::uint64_t>(r);
    if (idx >= s.grid.size()) throw std::runtime_error("sparse snapshot index out of range");
    s.indices.push_back(idx);
    s.values.emplace_back(get_le<double>(r + 8), get_le<double>(r + 16));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Reports

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n" << std::setprecision(17);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << "\n";
  }
}

json prediction_to_json(const mae::MAEPrediction& p) {
  json j;
  j["phi"] = p.phi;
  j["sigma"] = p.sigma;
  j["kx"] = p.kx;
  j["alpha0"] = complex_json(p.alpha0);
  j["beta0"] = complex_json(p.beta0);
  j["t0"] = p.t0;
  j["x10"] = p.x10;
  j["phi1_assumed_equal_phi"] = p.phi1_assumed_equal_phi;
  json ev = json::array();
  for (const auto& e : p.events)
    ev.push_back({{"kind", mae::to_string(e.kind)}, {"time", e.time}, {"x", e.x}, {"slow", e.slow},
                  {"multiplicity", e.multiplicity}});
  j["events"] = ev;
  json tr = json::array();
  for (const auto& t : p.trajectories) {
    json o{{"kind", mae::to_string(t.kind)}, {"origin_event", t.origin_event}, {"branch", t.branch},
           {"t", t.t}, {"position", t.position}};
    o["exponent"] = t.exponent ? json(*t.exponent) : json(nullptr);
    o["amplitude"] = t.amplitude ? json(*t.amplitude) : json(nullptr);
    tr.push_back(o);
  }
  j["trajectories"] = tr;
  const auto& pr = p.profiles;
  std::vector<double> s(pr.samples());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = pr.sample_coord(i);
  j["profiles"] = {{"kind", pr.kind() == analytic::SlowKind::radial ? "radial" : "planar"},
                   {"s", s},
                   {"x1", pr.x1_samples()},
                   {"t1", pr.t1_samples()}};
  j["diagnostics"] = p.diagnostics;
  return j;
}

json events_to_json(const std::vector<diagnostics::DetectedEvent>& events) {
  json a = json::array();
  for (const auto& e : events)
    a.push_back({{"kind", mae::to_string(e.kind)}, {"time", e.time}, {"x", e.x}, {"coord", e.coord},
                 {"low_confidence", e.low_confidence}});
  return a;
}

json scan_to_json(const std::vector<diagnostics::ScanPoint>& points) {
  json a = json::array();
  for (const auto& p : points)
    a.push_back({{"kx", p.kx},
                 {"ky", p.ky},
                 {"Lx", 2.0 * kPi / p.kx},
                 {"Ly", 2.0 * kPi / p.ky},
                 {"kx2_minus_ky2", p.kx * p.kx - p.ky * p.ky},
                 {"classification", diagnostics::to_string(p.classification)},
                 {"max_modulus", p.max_modulus},
                 {"crest_time", p.crest_time},
                 {"events", events_to_json(p.events)},
                 {"detail", p.detail}});
  return a;
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

void write_manifest(const fs::path& dir, const Manifest& m) {
  json j;
  j["command"] = m.command;
  j["config_sha256"] = sha256_hex(m.config_text);
  j["seed_meta"] = m.seed_meta;
  j["threads"] = m.threads;
  j["versions"] = {{"roguewave", "1.0.0"},
                   {"snapshot_format", kSnapshotVersion},
                   {"compiler", __VERSION__},
                   {"cxx_standard", static_cast<long>(__cplusplus)}};
  j["timings_seconds"] = m.timings;
  write_json(dir / "manifest.json", j);
}

void write_json(const fs::path& path, const json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << std::setw(2) << j << "\n";
}

}  // namespace roguewave::io
