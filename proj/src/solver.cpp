#include "roguewave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace roguewave::solver {

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::stopped_by_sink: return "stopped_by_sink";
    case RunStatus::corrupt: return "corrupt";
    case RunStatus::blow_up: return "blow_up";
  }
  return "unknown";
}

double mass(const ComplexField& field) {
  double s = 0.0;
  for (const auto& v : field.values) s += std::norm(v);
  return s * field.grid.cell_volume();
}

double hamiltonian(const ComplexField& field, const ModelSpec& model) {
  SplitStepSolver s(model, field.grid);
  return s.hamiltonian(field);
}

SplitStepSolver::SplitStepSolver(const ModelSpec& model, const PeriodicGrid& grid, bool dealias)
    : model_(model), grid_(grid), dealias_(dealias), plan_(grid) {
  model_.validate();
  if (grid_.dim() != model_.dim) {
    std::ostringstream os;
    os << "solver: grid dimension " << grid_.dim() << " does not match model dimension " << model_.dim;
    throw std::invalid_argument(os.str());
  }
  const std::size_t n = grid_.size();
  symbol_.resize(n);
  keep_.assign(n, 1);
  work_.resize(n);
  for (std::size_t f = 0; f < n; ++f) {
    const auto idx = grid_.unravel(f);
    double s = 0.0;
    for (int a = 0; a < grid_.dim(); ++a) {
      const double k = grid_.wavenumbers(a)[idx[a]];
      s += model_.sign(a) * k * k;
      if (dealias_) {
        const double kmax = kPi / grid_.spacing(a);
        if (std::abs(k) > (2.0 / 3.0) * kmax) keep_[f] = 0;
      }
    }
    symbol_[f] = s;
  }
}

double SplitStepSolver::symbol(std::size_t flat) const { return symbol_[flat]; }

const std::vector<cplx>& SplitStepSolver::propagator(double tau) {
  for (const auto& c : cache_)
    if (c.tau == tau) return c.factor;
  if (cache_.size() >= 4) cache_.erase(cache_.begin());
  CachedPropagator c{tau, std::vector<cplx>(symbol_.size())};
  for (std::size_t f = 0; f < symbol_.size(); ++f)
    c.factor[f] = keep_[f] ? std::polar(1.0, -symbol_[f] * tau) : cplx{0.0, 0.0};
  cache_.push_back(std::move(c));
  return cache_.back().factor;
}

void SplitStepSolver::linear_step(std::vector<cplx>& values, double tau) {
  if (values.size() != grid_.size()) throw std::invalid_argument("linear_step: field size does not match grid");
  const auto& p = propagator(tau);
  plan_.forward(values);
  for (std::size_t f = 0; f < values.size(); ++f) values[f] *= p[f];
  plan_.inverse(values);
}

void SplitStepSolver::nonlinear_step(std::vector<cplx>& values, double tau) {
  for (auto& v : values) v *= std::polar(1.0, 2.0 * std::norm(v) * tau);
}

void SplitStepSolver::step(EvolutionState& state, double dt) {
  linear_step(state.field.values, 0.5 * dt);
  nonlinear_step(state.field.values, dt);
  linear_step(state.field.values, 0.5 * dt);
  state.field.time += dt;
  ++state.steps;
}

double SplitStepSolver::hamiltonian(const ComplexField& field) {
  if (!(field.grid == grid_)) throw std::invalid_argument("hamiltonian: field grid does not match solver grid");
  work_ = field.values;
  double quartic = 0.0;
  for (const auto& v : work_) quartic += std::norm(v) * std::norm(v);
  plan_.forward(work_);
  double grad = 0.0;
  for (std::size_t f = 0; f < work_.size(); ++f) grad += symbol_[f] * std::norm(work_[f]);
  const double dv = grid_.cell_volume();
  return dv * (grad / static_cast<double>(grid_.size()) - quartic);
}

double SplitStepSolver::spectrum_tail_ratio(const std::vector<cplx>& values) {
  work_ = values;
  plan_.forward(work_);
  double peak = 0.0, tail = 0.0;
  for (std::size_t f = 0; f < work_.size(); ++f) {
    const double a = std::abs(work_[f]);
    peak = std::max(peak, a);
    const auto idx = grid_.unravel(f);
    bool outer = false;
    for (int ax = 0; ax < grid_.dim(); ++ax) {
      const double kmax = kPi / grid_.spacing(ax);
      if (std::abs(grid_.wavenumbers(ax)[idx[ax]]) >= 0.9 * kmax) outer = true;
    }
    if (outer) tail = std::max(tail, a);
  }
  return peak > 0.0 ? tail / peak : 0.0;
}

EvolveResult SplitStepSolver::evolve(const ComplexField& initial, const SimulationConfig& cfg, const SnapshotSink& sink) {
  cfg.validate();
  if (!(cfg.model == model_) || !(cfg.grid == grid_))
    throw std::invalid_argument("evolve: configuration does not match the solver's model and grid");
  if (!(initial.grid == grid_)) throw std::invalid_argument("evolve: initial field grid does not match");
  initial.check_finite();

  EvolveResult res;
  res.state.field = initial;
  auto& st = res.state;
  auto& u = st.field.values;
  const double t_start = initial.time;
  res.last_healthy_time = t_start;

  std::vector<double> targets;
  for (double t : cfg.output_times)
    if (t >= t_start - 1e-12) targets.push_back(t);
  if (targets.empty() || targets.back() < cfg.t_end) targets.push_back(cfg.t_end);
  const std::size_t n_outputs = std::count_if(cfg.output_times.begin(), cfg.output_times.end(),
                                              [&](double t) { return t >= t_start - 1e-12; });

  bool tail_warned = false;
  auto record_conservation = [&] {
    st.log.push_back({st.field.time, mass(st.field), hamiltonian(st.field)});
    if (!tail_warned && spectrum_tail_ratio(u) > 1e-8) {
      tail_warned = true;
      std::ostringstream os;
      os << "spectrum tail exceeds 1e-8 of the peak at t = " << st.field.time
         << "; the grid may be under-resolved";
      warn(os.str());
    }
  };
  record_conservation();

  // Emits outputs scheduled at the initial time.
  std::size_t next = 0;
  auto emit_due = [&]() -> bool {
    while (next < targets.size() && std::abs(targets[next] - st.field.time) <= 1e-12) {
      const bool is_output = next < n_outputs;
      ++next;
      if (is_output && sink && !sink(st.field)) return false;
    }
    return true;
  };
  if (!emit_due()) {
    res.status = RunStatus::stopped_by_sink;
    return res;
  }

  const double dt = cfg.dt;
  double pending = 0.0;  // linear flow owed to the field (fused half steps)
  while (next < targets.size()) {
    const double seg_start = st.field.time;
    const double T = targets[next];
    const double r = T - seg_start;
    const long n = std::max(1L, static_cast<long>(std::ceil(r / dt - 1e-9)));
    for (long j = 0; j < n; ++j) {
      const double h = j + 1 < n ? dt : r - (n - 1) * dt;
      linear_step(u, pending + 0.5 * h);
      // Nonlinear substep with the finiteness and blow-up monitors fused in.
      double peak2 = 0.0;
      bool finite = true;
      for (auto& v : u) {
        const double m2 = std::norm(v);
        if (!std::isfinite(m2)) finite = false;
        peak2 = std::max(peak2, m2);
        v *= std::polar(1.0, 2.0 * m2 * h);
      }
      pending = 0.5 * h;
      if (!finite) {
        res.status = RunStatus::corrupt;
        std::ostringstream os;
        os << "non-finite field encountered after t = " << res.last_healthy_time;
        res.message = os.str();
        return res;
      }
      if (peak2 > kBlowUpModulus * kBlowUpModulus) {
        res.status = RunStatus::blow_up;
        std::ostringstream os;
        os << "max|u| exceeded " << kBlowUpModulus << " after t = " << res.last_healthy_time
           << " (imminent blow-up)";
        res.message = os.str();
        linear_step(u, pending);
        st.field.time = j + 1 < n ? seg_start + (j + 1) * dt : T;
        return res;
      }
      res.last_healthy_time = st.field.time;
      st.field.time = j + 1 < n ? seg_start + (j + 1) * dt : T;
      ++st.steps;
      const bool at_target = j + 1 == n;
      const bool at_check = cfg.conservation_cadence > 0 && st.steps % cfg.conservation_cadence == 0;
      if (at_target || at_check) {
        linear_step(u, pending);
        pending = 0.0;
        if (at_check || (at_target && next < n_outputs)) record_conservation();
      }
    }
    res.last_healthy_time = st.field.time;
    if (!emit_due()) {
      res.status = RunStatus::stopped_by_sink;
      return res;
    }
  }
  if (st.log.empty() || st.log.back().time != st.field.time) record_conservation();
  res.status = RunStatus::completed;
  return res;
}

void linear_half_step(EvolutionState& state, const ModelSpec& model, double dt) {
  SplitStepSolver s(model, state.field.grid);
  s.linear_step(state.field.values, dt);
}

void nonlinear_step(EvolutionState& state, double dt) { SplitStepSolver::nonlinear_step(state.field.values, dt); }

}  // namespace roguewave::solver
