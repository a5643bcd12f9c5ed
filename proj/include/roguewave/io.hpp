#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "roguewave/core.hpp"
#include "roguewave/diagnostics.hpp"
#include "roguewave/mae.hpp"

namespace roguewave::io {

namespace fs = std::filesystem;
using nlohmann::json;

/// Configuration failure carrying the dotted path of the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::invalid_argument(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

enum class DatumKind { cauchy, doubly_periodic };
enum class Geometry { planar, radial };

struct SolverSettings {
  double dt = 1e-3;
  double t_end = 1.0;
  std::vector<double> output_times;
  /// When positive, outputs every `output_every` from `output_from` to t_end
  /// (in addition to output_times).
  double output_every = 0.0;
  double output_from = 0.0;
  int conservation_cadence = 100;
  bool dealias = false;
  bool operator==(const SolverSettings&) const = default;
};

struct DiagnosticsSettings {
  double threshold = 1.5;
  double compare_from = 0.0;
  double compare_to = -1.0;  // negative: t_end
  int persistence = 2;
  bool operator==(const DiagnosticsSettings&) const = default;
};

struct ScanSettings {
  /// (Lx, Ly) box sizes; kx = 2 pi / Lx, ky = 2 pi / Ly.
  std::vector<std::pair<double, double>> boxes;
  double epsilon = 1e-2;
  double t_max = 8.0;
  int nx = 32, ny = 32;
  double cadence = 0.02;
  int persistence = 5;
  bool operator==(const ScanSettings&) const = default;
};

struct LimitSettings {
  std::vector<double> phis;
  analytic::Window window;
  bool operator==(const LimitSettings& o) const {
    return phis == o.phis && window.x_min == o.window.x_min && window.x_max == o.window.x_max &&
           window.t_min == o.window.t_min && window.t_max == o.window.t_max && window.nx == o.window.nx &&
           window.nt == o.window.nt;
  }
};

struct OutputSettings {
  bool snapshots = true;
  /// Store only points with |u| above this level (sparse snapshots).
  std::optional<double> sparse_level;
  bool operator==(const OutputSettings&) const = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  ModelSpec model;
  DatumKind datum = DatumKind::cauchy;
  Geometry geometry = Geometry::planar;
  mae::CauchyData cauchy;
  /// Doubly periodic datum: epsilon and box (Lx, Ly).
  double dp_epsilon = 1e-2;
  double dp_Lx = 4.0, dp_Ly = 10.0;
  std::vector<double> lengths;
  std::vector<int> counts;
  SolverSettings solver;
  DiagnosticsSettings diagnostics;
  std::optional<ScanSettings> scan;
  std::optional<LimitSettings> limit;
  OutputSettings output;
  std::string output_dir = "out";

  bool operator==(const ExperimentConfig&) const = default;

  PeriodicGrid grid() const;
  SimulationConfig simulation() const;
  mae::SlowDomain slow_domain() const;
  /// Validates every referenced invariant; throws ConfigError.
  void validate() const;
};

ExperimentConfig parse_config(const json& j);
json emit_config(const ExperimentConfig& cfg);
ExperimentConfig load_config(const fs::path& path);

/// Builds the initial field described by the config.
ComplexField build_initial(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Snapshots: <stem>.json header plus <stem>.bin payload of little-endian
// float64 (re, im) pairs, x fastest.

inline constexpr int kSnapshotVersion = 1;

struct SnapshotPaths {
  fs::path header;
  fs::path payload;
};
SnapshotPaths snapshot_paths(const fs::path& stem);

void write_snapshot(const ComplexField& field, const fs::path& stem, const ModelSpec& model = {});
ComplexField read_snapshot(const fs::path& stem);
json read_snapshot_header(const fs::path& stem);

/// Points with |u| above `level`, stored as (uint64 flat index, re, im) records.
struct SparseSnapshot {
  PeriodicGrid grid;
  double time = 0.0;
  double level = 0.0;
  std::vector<std::uint64_t> indices;
  std::vector<cplx> values;
};
void write_sparse_snapshot(const ComplexField& field, double level, const fs::path& stem, const ModelSpec& model = {});
SparseSnapshot read_sparse_snapshot(const fs::path& stem);

// ---------------------------------------------------------------------------
// Reports

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

json prediction_to_json(const mae::MAEPrediction& p);
json events_to_json(const std::vector<diagnostics::DetectedEvent>& events);
json scan_to_json(const std::vector<diagnostics::ScanPoint>& points);

std::string sha256_hex(const std::string& data);

struct Manifest {
  std::string command;
  std::string config_text;
  std::string seed_meta;
  int threads = 1;
  std::map<std::string, double> timings;
};
void write_manifest(const fs::path& dir, const Manifest& m);

void write_json(const fs::path& path, const json& j);

}  // namespace roguewave::io
