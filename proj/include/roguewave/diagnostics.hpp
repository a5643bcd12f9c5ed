#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "roguewave/analytic.hpp"
#include "roguewave/core.hpp"
#include "roguewave/mae.hpp"
#include "roguewave/solver.hpp"

namespace roguewave::diagnostics {

/// Analytic field u(x, y, z, t) in lattice (not slow) coordinates.
using FieldEvaluator = std::function<cplx(double x, double y, double z, double t)>;

/// sup over the lattice of |num - evaluator(., t)|.
double uniform_distance(const ComplexField& num, const FieldEvaluator& ev, double t);
/// sup over the lattice of |a - b|; the grids must match.
double uniform_distance(const ComplexField& a, const ComplexField& b);

/// Adiabatic breather u1 sampled on a lattice. The slow coordinate is
/// delta * y (planar) or delta * sqrt(y^2 + z^2) (radial); x1 and t1 are
/// evaluated once per transverse lattice point.
class Q1DFieldSampler {
 public:
  Q1DFieldSampler(const analytic::Q1DProfiles& profiles, double delta, const PeriodicGrid& grid);
  ComplexField at(double t) const;
  double distance(const ComplexField& num) const;

 private:
  PeriodicGrid grid_;
  double phi_;
  std::vector<double> x1_, t1_;  // per transverse lattice point (y fastest)
};

/// Slow-domain extent that covers a grid's transverse box.
mae::SlowDomain covering_domain(const PeriodicGrid& grid, double delta, analytic::SlowKind kind);

struct Peak {
  std::array<int, 3> index{0, 0, 0};
  /// Sub-lattice position from a quadratic fit along each axis.
  std::array<double, 3> position{0.0, 0.0, 0.0};
  double height = 0.0;
  /// Second derivative of |u|^2 along the slow axis at the crest.
  double curvature = 0.0;
};

/// Crest line along the slow axis: for each slow index, the maximum of |u|
/// over x (on the mid transverse slice for 3 axes) and the slow-axis curvature
/// of |u|^2 through that maximum.
struct Ridge {
  std::vector<double> coord;
  std::vector<int> x_index;
  std::vector<double> x;
  std::vector<double> height;
  std::vector<double> curvature;
};

struct PeakRecord {
  double time = 0.0;
  std::vector<Peak> peaks;
  Ridge ridge;
  double max_modulus = 0.0;
};

struct PeakOptions {
  double threshold = 1.5;
  int slow_axis = 1;
};

/// Strict local maxima of |u| above threshold (periodic 3^d stencil), plus the ridge.
PeakRecord track_peaks(const ComplexField& snapshot, const PeakOptions& opt = {});

struct DetectedEvent {
  mae::EventKind kind = mae::EventKind::fission;
  double time = 0.0;
  double x = 0.0;
  /// Slow-axis lattice coordinate of the site.
  double coord = 0.0;
  bool low_confidence = false;
};

struct DetectOptions {
  double threshold = 1.5;
  /// Snapshots for which the new curvature sign must hold.
  int persistence = 2;
  /// Largest extremum displacement, in lattice cells, between snapshots.
  int max_jump = 3;
};

/// Fission where a ridge extremum's curvature crosses from negative to
/// positive while its height is above threshold, fusion for the reverse
/// crossing. Times come from linear interpolation of the zero crossing; a
/// missing peak-count change marks the event low-confidence.
std::vector<DetectedEvent> detect_fission_fusion(const std::vector<PeakRecord>& records,
                                                 const DetectOptions& opt = {});

struct TrackPoint {
  double time;
  double coord;
  double height;
};

/// Ridge maxima above threshold associated across records by nearest
/// neighbour with at most `max_jump` cells per record.
std::vector<std::vector<TrackPoint>> associate_ridge_tracks(const std::vector<PeakRecord>& records,
                                                            double threshold = 1.5, int max_jump = 3);

/// The two crest branches leaving `site` after `t_event` (branch +1 first).
std::array<std::vector<TrackPoint>, 2> fission_branches(const std::vector<PeakRecord>& records, double site,
                                                        double t_event, double threshold = 1.5,
                                                        int max_jump = 3);

struct ExponentFit {
  double exponent = 0.0;
  double amplitude = 0.0;
  double residual = 0.0;
  int samples = 0;
};

/// Least-squares fit of log|position - site| against log(t - t_event) over
/// 0 < t - t_event <= window. Throws std::invalid_argument with fewer than 8 samples.
ExponentFit fit_critical_exponent(const std::vector<std::pair<double, double>>& traj, double t_event,
                                  double site = 0.0, double window = 0.5);

/// Time of the maximum of `values` over `times`, refined by a parabola through
/// the discrete maximum and its neighbours.
double crest_time(const std::vector<double>& times, const std::vector<double>& values);
/// Same refinement at the first local maximum reaching `threshold` (falls back to the global maximum).
double first_crest_time(const std::vector<double>& times, const std::vector<double>& values, double threshold);

struct Topology {
  int components = 0;
  int euler_characteristic = 0;
  /// True for one component with Euler characteristic 0 that avoids the x axis.
  bool ring = false;
  std::size_t voxels = 0;
};

/// Topology of the closed voxel set |u| > level on a 3-axis grid.
Topology isosurface_topology(const ComplexField& field, double level);

enum class ScanClass { fission, no_fission, no_growth, failed };
std::string to_string(ScanClass c);

struct ScanPoint {
  double kx = 0.0, ky = 0.0;
  ScanClass classification = ScanClass::failed;
  double max_modulus = 0.0;
  /// Time of the first crest maximum.
  double crest_time = 0.0;
  std::vector<DetectedEvent> events;
  std::string detail;
};

struct ScanOptions {
  int nx = 32, ny = 32;
  double dt = 1e-3;
  double cadence = 0.02;
  double threshold = 1.5;
  int persistence = 5;
  /// Scan points evolved concurrently.
  int workers = 1;
};

/// Evolves the doubly periodic datum at every (kx, ky) until the first crest
/// has decayed below threshold (or t_max) and classifies the outcome.
std::vector<ScanPoint> mi_domain_scan(const ModelSpec& model, const std::vector<std::pair<double, double>>& k_points,
                                      double epsilon, double t_max, const ScanOptions& opt = {});

struct DiagnosticsSeries {
  std::vector<double> times;
  std::vector<double> distances;
  std::vector<PeakRecord> records;
  std::vector<solver::ConservationSample> conservation;
};

}  // namespace roguewave::diagnostics
