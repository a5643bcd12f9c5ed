#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "roguewave/core.hpp"
#include "roguewave/fft.hpp"

namespace roguewave::solver {

struct ConservationSample {
  double time = 0.0;
  double mass = 0.0;
  double hamiltonian = 0.0;
};

struct EvolutionState {
  ComplexField field;
  long steps = 0;
  std::vector<ConservationSample> log;
};

enum class RunStatus { completed, stopped_by_sink, corrupt, blow_up };
std::string to_string(RunStatus s);

struct EvolveResult {
  EvolutionState state;
  RunStatus status = RunStatus::completed;
  /// Time of the last state known to be finite (and below the modulus cap).
  double last_healthy_time = 0.0;
  std::string message;
};

/// Receives the field at every scheduled output time. Returning false stops
/// the evolution after the current snapshot.
using SnapshotSink = std::function<bool(const ComplexField&)>;

/// Lattice approximation of the mass: cell volume times sum |u|^2.
double mass(const ComplexField& field);

/// int (|u_x|^2 + eta1 |u_y|^2 + eta2 |u_z|^2 - |u|^4) with spectral gradients.
double hamiltonian(const ComplexField& field, const ModelSpec& model);

/// Strang split-step integrator with exact linear and nonlinear substeps.
class SplitStepSolver {
 public:
  SplitStepSolver(const ModelSpec& model, const PeriodicGrid& grid, bool dealias = false);

  const ModelSpec& model() const { return model_; }
  const PeriodicGrid& grid() const { return grid_; }

  /// Exact linear flow over duration tau: each mode times exp(-i (kx^2 + eta1 ky^2 + eta2 kz^2) tau).
  void linear_step(std::vector<cplx>& values, double tau);
  /// Exact nonlinear flow over duration tau: u <- u exp(2i|u|^2 tau).
  static void nonlinear_step(std::vector<cplx>& values, double tau);
  /// One Strang step (half linear, full nonlinear, half linear). Negative dt runs backwards.
  void step(EvolutionState& state, double dt);

  /// Evolves from `initial` to cfg.t_end, hitting every output time exactly by
  /// shrinking the last step before it. Conserved quantities are logged every
  /// cfg.conservation_cadence steps and at every output time.
  EvolveResult evolve(const ComplexField& initial, const SimulationConfig& cfg, const SnapshotSink& sink = {});

  double hamiltonian(const ComplexField& field);

  /// Largest spectral amplitude in the outer 10 % of modes relative to the peak.
  double spectrum_tail_ratio(const std::vector<cplx>& values);

  /// Modulus above which a run is flagged as blowing up.
  static constexpr double kBlowUpModulus = 50.0;

 private:
  const std::vector<cplx>& propagator(double tau);
  double symbol(std::size_t flat) const;

  ModelSpec model_;
  PeriodicGrid grid_;
  bool dealias_;
  FftPlan plan_;
  std::vector<double> symbol_;
  std::vector<unsigned char> keep_;
  std::vector<cplx> work_;
  struct CachedPropagator {
    double tau;
    std::vector<cplx> factor;
  };
  std::vector<CachedPropagator> cache_;
};

/// Convenience wrappers around a temporary solver.
void linear_half_step(EvolutionState& state, const ModelSpec& model, double dt);
void nonlinear_step(EvolutionState& state, double dt);

}  // namespace roguewave::solver
