#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "roguewave/analytic.hpp"
#include "roguewave/diagnostics.hpp"
#include "roguewave/fft.hpp"
#include "roguewave/io.hpp"
#include "roguewave/mae.hpp"
#include "roguewave/solver.hpp"

namespace rw = roguewave;
namespace io = roguewave::io;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Common {
  std::string config;
  std::string out;
  double dt = 0.0;
  int threads = 0;
  std::string seed_meta;
  std::string snapshots;
};

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("ROGUEWAVE_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("ROGUEWAVE_THREADS must be a positive integer");
  }
  return 1;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Context {
  io::ExperimentConfig cfg;
  fs::path out;
  io::Manifest manifest;
  Stopwatch clock;
};

Context open(const Common& c, const std::string& command) {
  Context ctx;
  ctx.cfg = io::load_config(c.config);
  if (c.dt > 0.0) ctx.cfg.solver.dt = c.dt;
  ctx.cfg.validate();
  ctx.out = c.out.empty() ? fs::path(ctx.cfg.output_dir) : fs::path(c.out);
  fs::create_directories(ctx.out);
  ctx.manifest.command = command;
  ctx.manifest.config_text = read_text(c.config);
  ctx.manifest.seed_meta = c.seed_meta;
  ctx.manifest.threads = resolve_threads(c.threads);
  rw::set_fft_threads(ctx.manifest.threads);
  ctx.manifest.timings["load"] = ctx.clock.lap();
  return ctx;
}

void finish(Context& ctx, const json& summary) {
  io::write_json(ctx.out / "summary.json", summary);
  ctx.manifest.timings["write"] = ctx.clock.lap();
  io::write_manifest(ctx.out, ctx.manifest);
}

rw::mae::MAEPrediction predict(const io::ExperimentConfig& cfg) {
  if (cfg.datum != io::DatumKind::cauchy) throw std::invalid_argument("prediction needs a cauchy datum");
  return rw::mae::predict_events(cfg.cauchy, cfg.slow_domain());
}

json detection_summary(const std::vector<rw::diagnostics::PeakRecord>& records, const io::ExperimentConfig& cfg,
                       std::vector<rw::diagnostics::DetectedEvent>& events) {
  rw::diagnostics::DetectOptions opt;
  opt.threshold = cfg.diagnostics.threshold;
  opt.persistence = cfg.diagnostics.persistence;
  events = rw::diagnostics::detect_fission_fusion(records, opt);
  std::vector<double> t, m;
  for (const auto& r : records) {
    t.push_back(r.time);
    m.push_back(r.max_modulus);
  }
  json j;
  j["events"] = io::events_to_json(events);
  j["max_modulus"] = m.empty() ? 0.0 : *std::max_element(m.begin(), m.end());
  if (t.size() >= 3) j["crest_time"] = rw::diagnostics::first_crest_time(t, m, cfg.diagnostics.threshold);
  return j;
}

void write_peak_csv(const fs::path& path, const std::vector<rw::diagnostics::PeakRecord>& records) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : records)
    for (const auto& p : r.peaks)
      rows.push_back({r.time, p.position[0], p.position[1], p.position[2], p.height, p.curvature});
  io::write_csv(path, {"time", "x_index", "y_index", "z_index", "height", "curvature"}, rows);
}

// Evolves the configured datum; `observe` sees every output snapshot.
rw::solver::EvolveResult run(const io::ExperimentConfig& cfg,
                             const std::function<void(const rw::ComplexField&)>& observe) {
  const auto sim = cfg.simulation();
  rw::solver::SplitStepSolver solver(sim.model, sim.grid, sim.dealias);
  return solver.evolve(io::build_initial(cfg), sim, [&](const rw::ComplexField& f) {
    observe(f);
    return true;
  });
}

json status_json(const rw::solver::EvolveResult& r) {
  return {{"status", rw::solver::to_string(r.status)},
          {"steps", r.state.steps},
          {"last_healthy_time", r.last_healthy_time},
          {"message", r.message}};
}

void write_conservation(const fs::path& path, const std::vector<rw::solver::ConservationSample>& log) {
  std::vector<std::vector<double>> rows;
  for (const auto& s : log) rows.push_back({s.time, s.mass, s.hamiltonian});
  io::write_csv(path, {"time", "mass", "hamiltonian"}, rows);
}

int cmd_predict(const Common& c) {
  auto ctx = open(c, "predict");
  const auto p = predict(ctx.cfg);
  ctx.manifest.timings["predict"] = ctx.clock.lap();
  json s = io::prediction_to_json(p);
  s["measurement"] =
      "the formula t0 is the leading-order appearance time; measure the crest with `simulate` or `compare`";
  std::vector<std::vector<double>> rows;
  const auto& prof = p.profiles;
  for (std::size_t i = 0; i < prof.samples(); ++i)
    rows.push_back({prof.sample_coord(i), prof.x1_samples()[i], prof.t1_samples()[i]});
  io::write_csv(ctx.out / "profiles.csv", {"s", "x1", "t1"}, rows);
  finish(ctx, s);
  return 0;
}

int cmd_simulate(const Common& c) {
  auto ctx = open(c, "simulate");
  const auto& cfg = ctx.cfg;
  std::vector<rw::diagnostics::PeakRecord> records;
  std::vector<std::vector<double>> series;
  rw::diagnostics::PeakOptions popt;
  popt.threshold = cfg.diagnostics.threshold;
  int index = 0;
  const auto result = run(cfg, [&](const rw::ComplexField& f) {
    records.push_back(rw::diagnostics::track_peaks(f, popt));
    series.push_back({f.time, records.back().max_modulus, rw::solver::mass(f)});
    if (cfg.output.snapshots) {
      char stem[32];
      std::snprintf(stem, sizeof stem, "snap_%05d", index);
      fs::create_directories(ctx.out / "snapshots");
      if (cfg.output.sparse_level)
        io::write_sparse_snapshot(f, *cfg.output.sparse_level, ctx.out / "snapshots" / stem, cfg.model);
      else
        io::write_snapshot(f, ctx.out / "snapshots" / stem, cfg.model);
    }
    ++index;
  });
  ctx.manifest.timings["evolve"] = ctx.clock.lap();
  io::write_csv(ctx.out / "series.csv", {"time", "max_modulus", "mass"}, series);
  write_conservation(ctx.out / "conservation.csv", result.state.log);
  write_peak_csv(ctx.out / "peaks.csv", records);
  std::vector<rw::diagnostics::DetectedEvent> events;
  json s = detection_summary(records, cfg, events);
  s["run"] = status_json(result);
  s["snapshots"] = index;
  finish(ctx, s);
  return result.status == rw::solver::RunStatus::completed ? 0 : 2;
}

std::vector<rw::ComplexField> load_snapshot_dir(const fs::path& dir) {
  std::vector<fs::path> stems;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".json") stems.push_back(e.path().parent_path() / e.path().stem());
  std::sort(stems.begin(), stems.end());
  std::vector<rw::ComplexField> out;
  for (const auto& s : stems) {
    const auto header = io::read_snapshot_header(s);
    if (header.value("sparse", false))
      throw std::invalid_argument("sparse snapshot " + s.string() + " cannot be compared");
    out.push_back(io::read_snapshot(s));
  }
  return out;
}

int cmd_compare(const Common& c) {
  auto ctx = open(c, "compare");
  const auto& cfg = ctx.cfg;
  const auto p = predict(cfg);
  const double delta = cfg.cauchy.delta;
  const auto grid = cfg.grid();
  rw::diagnostics::Q1DFieldSampler sampler(p.profiles, delta, grid);
  const double t_from = cfg.diagnostics.compare_from;
  const double t_to = cfg.diagnostics.compare_to < 0.0 ? cfg.solver.t_end : cfg.diagnostics.compare_to;
  ctx.manifest.timings["predict"] = ctx.clock.lap();

  std::vector<std::vector<double>> rows;
  std::vector<rw::diagnostics::PeakRecord> records;
  rw::diagnostics::PeakOptions popt;
  popt.threshold = cfg.diagnostics.threshold;
  double dmax = 0.0;
  auto observe = [&](const rw::ComplexField& f) {
    if (!(f.grid == grid)) throw std::invalid_argument("snapshot grid does not match the configuration");
    records.push_back(rw::diagnostics::track_peaks(f, popt));
    if (f.time < t_from - 1e-12 || f.time > t_to + 1e-12) return;
    const double d = sampler.distance(f);
    dmax = std::max(dmax, d);
    rows.push_back({f.time, d, records.back().max_modulus});
  };
  json s;
  int code = 0;
  if (!c.snapshots.empty()) {
    for (const auto& f : load_snapshot_dir(c.snapshots)) observe(f);
    s["source"] = c.snapshots;
  } else {
    const auto r = run(cfg, observe);
    s["run"] = status_json(r);
    write_conservation(ctx.out / "conservation.csv", r.state.log);
    if (r.status != rw::solver::RunStatus::completed) code = 2;
  }
  ctx.manifest.timings["compare"] = ctx.clock.lap();
  if (rows.empty()) throw std::runtime_error("no snapshot fell inside the comparison window");
  io::write_csv(ctx.out / "distance.csv", {"time", "distance", "max_modulus"}, rows);
  write_peak_csv(ctx.out / "peaks.csv", records);
  std::vector<rw::diagnostics::DetectedEvent> events;
  s.update(detection_summary(records, cfg, events));
  s["max_distance"] = dmax;
  s["window"] = {t_from, t_to};
  s["prediction"] = io::prediction_to_json(p);
  finish(ctx, s);
  return code;
}

int cmd_scan(const Common& c) {
  auto ctx = open(c, "scan");
  const auto& cfg = ctx.cfg;
  if (!cfg.scan) throw io::ConfigError("scan", "the scan command needs a scan section");
  const auto& sc = *cfg.scan;
  std::vector<std::pair<double, double>> k;
  for (const auto& [Lx, Ly] : sc.boxes) k.emplace_back(2.0 * rw::kPi / Lx, 2.0 * rw::kPi / Ly);
  rw::diagnostics::ScanOptions opt;
  opt.nx = sc.nx;
  opt.ny = sc.ny;
  opt.dt = cfg.solver.dt;
  opt.cadence = sc.cadence;
  opt.threshold = cfg.diagnostics.threshold;
  opt.persistence = sc.persistence;
  opt.workers = ctx.manifest.threads;
  rw::set_fft_threads(1);
  const auto points = rw::diagnostics::mi_domain_scan(cfg.model, k, sc.epsilon, sc.t_max, opt);
  ctx.manifest.timings["scan"] = ctx.clock.lap();
  json s;
  s["points"] = io::scan_to_json(points);
  for (std::size_t i = 0; i < points.size(); ++i) {
    s["points"][i]["Lx"] = sc.boxes[i].first;
    s["points"][i]["Ly"] = sc.boxes[i].second;
  }
  const bool failed = std::any_of(points.begin(), points.end(),
                                  [](const auto& p) { return p.classification == rw::diagnostics::ScanClass::failed; });
  finish(ctx, s);
  return failed ? 2 : 0;
}

int cmd_limit(const Common& c) {
  auto ctx = open(c, "limit-check");
  const auto& cfg = ctx.cfg;
  if (!cfg.limit) throw io::ConfigError("limit", "the limit-check command needs a limit section");
  std::vector<std::vector<double>> rows;
  json table = json::array();
  bool monotone = true;
  double prev = std::numeric_limits<double>::infinity();
  auto phis = cfg.limit->phis;
  std::sort(phis.begin(), phis.end());
  for (double phi : phis) {
    const double d = rw::analytic::peregrine_limit_check(phi, cfg.limit->window);
    rows.push_back({phi, d});
    table.push_back({{"phi", phi}, {"distance", d}});
    if (d > prev) monotone = false;
    prev = d;
  }
  ctx.manifest.timings["limit"] = ctx.clock.lap();
  io::write_csv(ctx.out / "limit.csv", {"phi", "distance"}, rows);
  finish(ctx, {{"table", table}, {"monotone_decreasing", monotone}});
  return monotone ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-one-dimensional rogue wave toolkit"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "experiment configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", common.out, "output directory (defaults to the config's output_dir)");
    sub->add_option("--dt", common.dt, "override the solver time step")->check(CLI::PositiveNumber);
    sub->add_option("--threads", common.threads, "worker threads (default: ROGUEWAVE_THREADS or 1)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed-meta", common.seed_meta, "free-form string recorded in the manifest");
  };
  auto* predict_cmd = app.add_subcommand("predict", "MAE report from a configuration");
  auto* simulate_cmd = app.add_subcommand("simulate", "run the solver and write snapshots and series");
  auto* compare_cmd = app.add_subcommand("compare", "uniform distance to the analytic approximant");
  auto* scan_cmd = app.add_subcommand("scan", "MI-domain classification map");
  auto* limit_cmd = app.add_subcommand("limit-check", "Peregrine long-wave limit table");
  for (auto* s : {predict_cmd, simulate_cmd, compare_cmd, scan_cmd, limit_cmd}) add_common(s);
  compare_cmd->add_option("--snapshots", common.snapshots, "compare stored dense snapshots instead of simulating")
      ->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*predict_cmd) return cmd_predict(common);
    if (*simulate_cmd) return cmd_simulate(common);
    if (*compare_cmd) return cmd_compare(common);
    if (*scan_cmd) return cmd_scan(common);
    if (*limit_cmd) return cmd_limit(common);
  } catch (const io::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
