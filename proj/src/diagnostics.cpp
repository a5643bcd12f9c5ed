#include "roguewave/diagnostics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include "roguewave/fft.hpp"
#include "roguewave/initialdata.hpp"

namespace roguewave::diagnostics {

double uniform_distance(const ComplexField& num, const FieldEvaluator& ev, double t) {
  const auto& g = num.grid;
  double sup = 0.0;
  for (std::size_t f = 0; f < num.values.size(); ++f) {
    const auto idx = g.unravel(f);
    const double x = g.coords(0)[idx[0]];
    const double y = g.dim() > 1 ? g.coords(1)[idx[1]] : 0.0;
    const double z = g.dim() > 2 ? g.coords(2)[idx[2]] : 0.0;
    sup = std::max(sup, std::abs(num.values[f] - ev(x, y, z, t)));
  }
  return sup;
}

double uniform_distance(const ComplexField& a, const ComplexField& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("uniform_distance: grids differ");
  double sup = 0.0;
  for (std::size_t f = 0; f < a.values.size(); ++f) sup = std::max(sup, std::abs(a.values[f] - b.values[f]));
  return sup;
}

// ---------------------------------------------------------------------------

Q1DFieldSampler::Q1DFieldSampler(const analytic::Q1DProfiles& profiles, double delta, const PeriodicGrid& grid)
    : grid_(grid), phi_(profiles.phi()) {
  const int ny = grid.dim() > 1 ? grid.count(1) : 1;
  const int nz = grid.dim() > 2 ? grid.count(2) : 1;
  x1_.resize(static_cast<std::size_t>(ny) * nz);
  t1_.resize(x1_.size());
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j) {
      const double y = grid.dim() > 1 ? grid.coords(1)[j] : 0.0;
      const double z = grid.dim() > 2 ? grid.coords(2)[k] : 0.0;
      const double s = profiles.kind() == analytic::SlowKind::radial ? delta * std::hypot(y, z) : delta * y;
      x1_[j + static_cast<std::size_t>(ny) * k] = profiles.x1(s);
      t1_[j + static_cast<std::size_t>(ny) * k] = profiles.t1(s);
    }
}

ComplexField Q1DFieldSampler::at(double t) const {
  ComplexField u(grid_, t);
  const int nx = grid_.count(0);
  const cplx phase = std::polar(1.0, 2.0 * t + 2.0 * phi_);
  for (std::size_t line = 0; line < x1_.size(); ++line) {
    const auto p = analytic::BreatherParams::from_phi(phi_, x1_[line], t1_[line]);
    for (int i = 0; i < nx; ++i)
      u.values[line * nx + i] = analytic::akhmediev(grid_.coords(0)[i], t, p) * phase;
  }
  return u;
}

double Q1DFieldSampler::distance(const ComplexField& num) const { return uniform_distance(num, at(num.time)); }

mae::SlowDomain covering_domain(const PeriodicGrid& grid, double delta, analytic::SlowKind kind) {
  mae::SlowDomain d;
  d.kind = kind;
  if (grid.dim() < 2) {
    d.extent = 1.0;
    return d;
  }
  double half = 0.5 * grid.length(1);
  if (kind == analytic::SlowKind::radial && grid.dim() > 2) half = std::hypot(half, 0.5 * grid.length(2));
  d.extent = delta * half * (1.0 + 1e-9);
  return d;
}

// ---------------------------------------------------------------------------
// Peaks and ridges

namespace {

int wrap(int i, int n) { return ((i % n) + n) % n; }

// Offset in (-1/2, 1/2) of a parabola's vertex through (-1, a), (0, b), (1, c).
double vertex_offset(double a, double b, double c) {
  const double den = a - 2.0 * b + c;
  if (den >= 0.0) return 0.0;
  return std::clamp(0.5 * (a - c) / den, -0.5, 0.5);
}

double vertex_height(double a, double b, double c) {
  const double den = a - 2.0 * b + c;
  if (den >= 0.0) return b;
  return b - (a - c) * (a - c) / (8.0 * den);
}

std::vector<double> modulus(const ComplexField& u) {
  std::vector<double> m(u.values.size());
  for (std::size_t f = 0; f < m.size(); ++f) m[f] = std::abs(u.values[f]);
  return m;
}

// Slow-axis second derivative of |u|^2 along the lattice line through (i, j, k).
std::vector<double> slow_line_curvature(const ComplexField& u, int slow_axis, std::array<int, 3> at) {
  const auto& g = u.grid;
  const int n = g.count(slow_axis);
  std::vector<double> line(n);
  for (int s = 0; s < n; ++s) {
    auto idx = at;
    idx[slow_axis] = s;
    line[s] = std::norm(u.values[g.index(idx[0], idx[1], idx[2])]);
  }
  return spectral_derivative(line, g.length(slow_axis), 2);
}

}  // namespace

PeakRecord track_peaks(const ComplexField& u, const PeakOptions& opt) {
  const auto& g = u.grid;
  PeakRecord rec;
  rec.time = u.time;
  const auto m = modulus(u);
  rec.max_modulus = m.empty() ? 0.0 : *std::max_element(m.begin(), m.end());
  const int d = g.dim();
  const bool has_slow = opt.slow_axis > 0 && opt.slow_axis < d;

  std::map<std::pair<int, int>, std::vector<double>> curvature_cache;  // (i, k) line -> curvature
  auto curvature_line = [&](int i, int k) -> const std::vector<double>& {
    auto key = std::make_pair(i, k);
    auto it = curvature_cache.find(key);
    if (it == curvature_cache.end()) {
      std::array<int, 3> at{i, 0, k};
      if (opt.slow_axis == 2) at = {i, k, 0};
      it = curvature_cache.emplace(key, slow_line_curvature(u, opt.slow_axis, at)).first;
    }
    return it->second;
  };

  // Strict local maxima over the periodic 3^d stencil.
  const int nx = g.count(0);
  const int ny = d > 1 ? g.count(1) : 1;
  const int nz = d > 2 ? g.count(2) : 1;
  for (std::size_t f = 0; f < m.size(); ++f) {
    const double h = m[f];
    if (h < opt.threshold) continue;
    const auto c = g.unravel(f);
    bool is_max = true;
    for (int dk = (d > 2 ? -1 : 0); dk <= (d > 2 ? 1 : 0) && is_max; ++dk)
      for (int dj = (d > 1 ? -1 : 0); dj <= (d > 1 ? 1 : 0) && is_max; ++dj)
        for (int di = -1; di <= 1; ++di) {
          if (!di && !dj && !dk) continue;
          if (m[g.index(wrap(c[0] + di, nx), wrap(c[1] + dj, ny), wrap(c[2] + dk, nz))] >= h) {
            is_max = false;
            break;
          }
        }
    if (!is_max) continue;
    Peak p;
    p.index = c;
    double height = h;
    for (int a = 0; a < d; ++a) {
      auto lo = c, hi = c;
      lo[a] = wrap(c[a] - 1, g.count(a));
      hi[a] = wrap(c[a] + 1, g.count(a));
      const double va = m[g.index(lo[0], lo[1], lo[2])];
      const double vc = m[g.index(hi[0], hi[1], hi[2])];
      p.position[a] = g.coords(a)[c[a]] + vertex_offset(va, h, vc) * g.spacing(a);
      height += vertex_height(va, h, vc) - h;
    }
    p.height = height;
    if (has_slow) {
      const int other = opt.slow_axis == 1 ? c[2] : c[1];
      p.curvature = curvature_line(c[0], other)[c[opt.slow_axis]];
    }
    rec.peaks.push_back(p);
  }

  if (has_slow) {
    const int ns = g.count(opt.slow_axis);
    const int other_axis = opt.slow_axis == 1 ? 2 : 1;
    const int mid = other_axis < d ? g.count(other_axis) / 2 : 0;
    auto& r = rec.ridge;
    r.coord.assign(g.coords(opt.slow_axis).begin(), g.coords(opt.slow_axis).end());
    r.x_index.resize(ns);
    r.x.resize(ns);
    r.height.resize(ns);
    r.curvature.resize(ns);
    for (int s = 0; s < ns; ++s) {
      int best = 0;
      double hb = -1.0;
      for (int i = 0; i < nx; ++i) {
        std::array<int, 3> idx{i, 0, 0};
        idx[opt.slow_axis] = s;
        if (other_axis < d) idx[other_axis] = mid;
        const double v = m[g.index(idx[0], idx[1], idx[2])];
        if (v > hb) {
          hb = v;
          best = i;
        }
      }
      r.x_index[s] = best;
      r.x[s] = g.coords(0)[best];
      r.height[s] = hb;
      r.curvature[s] = curvature_line(best, mid)[s];
    }
  }
  return rec;
}

// ---------------------------------------------------------------------------
// Event detection

namespace {

struct Extremum {
  int index;
  bool is_max;
};

std::vector<Extremum> ridge_extrema(const Ridge& r) {
  std::vector<Extremum> out;
  const int n = static_cast<int>(r.height.size());
  for (int j = 0; j < n; ++j) {
    const double a = r.height[wrap(j - 1, n)], b = r.height[j], c = r.height[wrap(j + 1, n)];
    if (b > a && b >= c) out.push_back({j, true});
    else if (b < a && b <= c) out.push_back({j, false});
  }
  return out;
}

int count_maxima(const Ridge& r, double threshold) {
  int c = 0;
  for (const auto& e : ridge_extrema(r))
    if (e.is_max && r.height[e.index] >= threshold) ++c;
  return c;
}

int cell_distance(int a, int b, int n) {
  const int d = std::abs(a - b) % n;
  return std::min(d, n - d);
}

struct SiteSample {
  std::size_t record;
  int index;
};

// Greedy nearest-neighbour association of ridge extrema across records.
std::vector<std::vector<SiteSample>> site_tracks(const std::vector<PeakRecord>& records, int max_jump) {
  std::vector<std::vector<SiteSample>> tracks;
  std::vector<std::size_t> open;  // tracks seen in the previous record
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& ridge = records[r].ridge;
    const int n = static_cast<int>(ridge.height.size());
    const auto ex = ridge_extrema(ridge);
    std::vector<std::tuple<int, std::size_t, std::size_t>> pairs;  // distance, open slot, extremum
    for (std::size_t o = 0; o < open.size(); ++o)
      for (std::size_t e = 0; e < ex.size(); ++e) {
        const int dist = cell_distance(tracks[open[o]].back().index, ex[e].index, n);
        if (dist <= max_jump) pairs.emplace_back(dist, o, e);
      }
    std::sort(pairs.begin(), pairs.end());
    std::vector<bool> used_o(open.size(), false), used_e(ex.size(), false);
    std::vector<std::size_t> next_open;
    for (const auto& [dist, o, e] : pairs) {
      if (used_o[o] || used_e[e]) continue;
      used_o[o] = used_e[e] = true;
      tracks[open[o]].push_back({r, ex[e].index});
      next_open.push_back(open[o]);
    }
    for (std::size_t e = 0; e < ex.size(); ++e)
      if (!used_e[e]) {
        tracks.push_back({{r, ex[e].index}});
        next_open.push_back(tracks.size() - 1);
      }
    open = std::move(next_open);
  }
  return tracks;
}

}  // namespace

std::vector<DetectedEvent> detect_fission_fusion(const std::vector<PeakRecord>& records, const DetectOptions& opt) {
  for (std::size_t r = 1; r < records.size(); ++r)
    if (!(records[r].time > records[r - 1].time))
      throw std::invalid_argument("detect_fission_fusion: records must be in increasing time order");
  std::vector<DetectedEvent> events;
  const int P = std::max(1, opt.persistence);
  for (const auto& track : site_tracks(records, opt.max_jump)) {
    auto curv = [&](std::size_t s) { return records[track[s].record].ridge.curvature[track[s].index]; };
    auto height = [&](std::size_t s) { return records[track[s].record].ridge.height[track[s].index]; };
    for (std::size_t s = 0; s + 1 < track.size(); ++s) {
      const double c0 = curv(s), c1 = curv(s + 1);
      if ((c0 < 0.0) == (c1 < 0.0) || c0 == 0.0) continue;
      if (std::max(height(s), height(s + 1)) < opt.threshold) continue;
      if (s + P > track.size()) continue;
      bool persists = true;
      for (std::size_t q = s + 1; q + 1 <= s + P; ++q)
        if ((curv(q) < 0.0) != (c1 < 0.0)) persists = false;
      if (!persists) continue;
      DetectedEvent ev;
      ev.kind = c0 < 0.0 ? mae::EventKind::fission : mae::EventKind::fusion;
      const auto& ra = records[track[s].record];
      const auto& rb = records[track[s + 1].record];
      const double w = c0 / (c0 - c1);
      ev.time = ra.time + w * (rb.time - ra.time);
      const int idx = track[s + 1].index;
      ev.coord = rb.ridge.coord[idx];
      ev.x = rb.ridge.x[idx];
      // Peak-count confirmation over a short window after the crossing.
      const int before = count_maxima(ra.ridge, opt.threshold);
      const std::size_t last = std::min(records.size() - 1, track[s + 1].record + std::max<std::size_t>(P, 5));
      bool confirmed = false;
      for (std::size_t q = track[s + 1].record; q <= last; ++q) {
        const int after = count_maxima(records[q].ridge, opt.threshold);
        if (ev.kind == mae::EventKind::fission ? after > before : after < before) confirmed = true;
      }
      ev.low_confidence = !confirmed;
      events.push_back(ev);
    }
  }
  std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) { return a.time < b.time; });
  return events;
}

// ---------------------------------------------------------------------------
// Tracks and fits

namespace {

struct RidgeMax {
  double coord;
  double height;
  int index;
};

std::vector<RidgeMax> ridge_maxima(const Ridge& r, double threshold) {
  std::vector<RidgeMax> out;
  const int n = static_cast<int>(r.height.size());
  if (n < 3) return out;
  const double h = r.coord[1] - r.coord[0];
  for (const auto& e : ridge_extrema(r)) {
    if (!e.is_max || r.height[e.index] < threshold) continue;
    const double a = r.height[wrap(e.index - 1, n)], b = r.height[e.index], c = r.height[wrap(e.index + 1, n)];
    out.push_back({r.coord[e.index] + vertex_offset(a, b, c) * h, vertex_height(a, b, c), e.index});
  }
  return out;
}

double periodic_offset(double a, double b, double period) {
  double d = a - b;
  d -= period * std::round(d / period);
  return d;
}

double ridge_period(const Ridge& r) {
  return r.coord.size() < 2 ? 0.0 : (r.coord[1] - r.coord[0]) * static_cast<double>(r.coord.size());
}

}  // namespace

std::vector<std::vector<TrackPoint>> associate_ridge_tracks(const std::vector<PeakRecord>& records, double threshold,
                                                            int max_jump) {
  std::vector<std::vector<TrackPoint>> tracks;
  std::vector<std::pair<std::size_t, int>> open;  // track, last lattice index
  for (const auto& rec : records) {
    const int n = static_cast<int>(rec.ridge.height.size());
    if (n == 0) continue;
    const auto mx = ridge_maxima(rec.ridge, threshold);
    std::vector<std::tuple<int, std::size_t, std::size_t>> pairs;
    for (std::size_t o = 0; o < open.size(); ++o)
      for (std::size_t e = 0; e < mx.size(); ++e) {
        const int dist = cell_distance(open[o].second, mx[e].index, n);
        if (dist <= max_jump) pairs.emplace_back(dist, o, e);
      }
    std::sort(pairs.begin(), pairs.end());
    std::vector<bool> uo(open.size(), false), ue(mx.size(), false);
    std::vector<std::pair<std::size_t, int>> next;
    for (const auto& [dist, o, e] : pairs) {
      if (uo[o] || ue[e]) continue;
      uo[o] = ue[e] = true;
      tracks[open[o].first].push_back({rec.time, mx[e].coord, mx[e].height});
      next.emplace_back(open[o].first, mx[e].index);
    }
    for (std::size_t e = 0; e < mx.size(); ++e)
      if (!ue[e]) {
        tracks.push_back({{rec.time, mx[e].coord, mx[e].height}});
        next.emplace_back(tracks.size() - 1, mx[e].index);
      }
    open = std::move(next);
  }
  return tracks;
}

std::array<std::vector<TrackPoint>, 2> fission_branches(const std::vector<PeakRecord>& records, double site,
                                                        double t_event, double threshold, int max_jump) {
  std::array<std::vector<TrackPoint>, 2> out;
  for (int b = 0; b < 2; ++b) {
    const double sign = b == 0 ? 1.0 : -1.0;
    double last_offset = 0.0;
    for (const auto& rec : records) {
      if (!(rec.time > t_event) || rec.ridge.coord.size() < 3) continue;
      const double period = ridge_period(rec.ridge);
      const double spacing = rec.ridge.coord[1] - rec.ridge.coord[0];
      const RidgeMax* best = nullptr;
      double best_off = 0.0;
      const auto mx = ridge_maxima(rec.ridge, threshold);
      for (const auto& m : mx) {
        const double off = sign * periodic_offset(m.coord, site, period);
        if (off <= 0.25 * spacing) continue;
        if (!best || off < best_off) {
          best = &m;
          best_off = off;
        }
      }
      if (!best) {
        if (!out[b].empty()) break;
        continue;
      }
      if (!out[b].empty() && std::abs(best_off - last_offset) > max_jump * spacing) break;
      out[b].push_back({rec.time, site + sign * best_off, best->height});
      last_offset = best_off;
    }
  }
  return out;
}

ExponentFit fit_critical_exponent(const std::vector<std::pair<double, double>>& traj, double t_event, double site,
                                  double window) {
  std::vector<double> lx, ly;
  for (const auto& [t, pos] : traj) {
    const double tau = t - t_event;
    const double off = std::abs(pos - site);
    if (tau > 0.0 && tau <= window && off > 0.0) {
      lx.push_back(std::log(tau));
      ly.push_back(std::log(off));
    }
  }
  if (lx.size() < 8) {
    std::ostringstream os;
    os << "fit_critical_exponent: " << lx.size() << " samples in the fit window, at least 8 required";
    throw std::invalid_argument(os.str());
  }
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_critical_exponent: degenerate time samples");
  ExponentFit fit;
  fit.exponent = sxy / sxx;
  const double intercept = my - fit.exponent * mx;
  fit.amplitude = std::exp(intercept);
  double rss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double e = ly[i] - (intercept + fit.exponent * lx[i]);
    rss += e * e;
  }
  fit.residual = std::sqrt(rss / n);
  fit.samples = static_cast<int>(lx.size());
  return fit;
}

namespace {

double refine_crest(const std::vector<double>& times, const std::vector<double>& values, std::size_t m) {
  if (m == 0 || m + 1 == values.size()) return times[m];
  const double t0 = times[m - 1], t1 = times[m], t2 = times[m + 1];
  const double v0 = values[m - 1], v1 = values[m], v2 = values[m + 1];
  // Vertex of the interpolating parabola through three (possibly uneven) samples.
  const double num = (t1 - t0) * (t1 - t0) * (v1 - v2) - (t1 - t2) * (t1 - t2) * (v1 - v0);
  const double den = (t1 - t0) * (v1 - v2) - (t1 - t2) * (v1 - v0);
  if (den == 0.0) return t1;
  return std::clamp(t1 - 0.5 * num / den, t0, t2);
}

}  // namespace

double crest_time(const std::vector<double>& times, const std::vector<double>& values) {
  if (times.size() != values.size() || times.empty()) throw std::invalid_argument("crest_time: bad series");
  const auto m = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
  return refine_crest(times, values, m);
}

double first_crest_time(const std::vector<double>& times, const std::vector<double>& values, double threshold) {
  if (times.size() != values.size() || times.empty()) throw std::invalid_argument("first_crest_time: bad series");
  for (std::size_t i = 0; i + 1 < values.size(); ++i)
    if (values[i] >= threshold && values[i] >= values[i + 1] && (i == 0 || values[i] > values[i - 1]))
      return refine_crest(times, values, i);
  return crest_time(times, values);
}

// ---------------------------------------------------------------------------
// Topology

Topology isosurface_topology(const ComplexField& u, double level) {
  const auto& g = u.grid;
  if (g.dim() != 3) throw std::invalid_argument("isosurface_topology: a 3-axis field is required");
  const int n0 = g.count(0), n1 = g.count(1), n2 = g.count(2);
  std::vector<unsigned char> in(u.values.size());
  Topology topo;
  for (std::size_t f = 0; f < in.size(); ++f) {
    in[f] = std::abs(u.values[f]) > level;
    topo.voxels += in[f];
  }
  auto voxel = [&](int i, int j, int k) -> bool {
    if (i < 0 || j < 0 || k < 0 || i >= n0 || j >= n1 || k >= n2) return false;
    return in[g.index(i, j, k)];
  };

  // Components under 26-connectivity, the adjacency of closed cubes.
  std::vector<int> label(in.size(), -1);
  std::vector<std::size_t> stack;
  for (std::size_t f = 0; f < in.size(); ++f) {
    if (!in[f] || label[f] >= 0) continue;
    const int id = topo.components++;
    label[f] = id;
    stack.push_back(f);
    while (!stack.empty()) {
      const auto c = g.unravel(stack.back());
      stack.pop_back();
      for (int dk = -1; dk <= 1; ++dk)
        for (int dj = -1; dj <= 1; ++dj)
          for (int di = -1; di <= 1; ++di) {
            const int i = c[0] + di, j = c[1] + dj, k = c[2] + dk;
            if (!voxel(i, j, k)) continue;
            const std::size_t q = g.index(i, j, k);
            if (label[q] < 0) {
              label[q] = id;
              stack.push_back(q);
            }
          }
    }
  }

  // Euler characteristic V - E + F - C of the union of closed cubes.
  long V = 0, E = 0, F = 0, C = static_cast<long>(topo.voxels);
  for (int k = 0; k <= n2; ++k)
    for (int j = 0; j <= n1; ++j)
      for (int i = 0; i <= n0; ++i) {
        // Lattice vertex (i, j, k) is the corner shared by voxels (i-1..i, j-1..j, k-1..k).
        bool v = false;
        for (int c = 0; c < 8 && !v; ++c) v = voxel(i - (c & 1), j - ((c >> 1) & 1), k - ((c >> 2) & 1));
        V += v;
        // Edges from this vertex along +x, +y, +z.
        E += voxel(i, j, k) || voxel(i, j - 1, k) || voxel(i, j, k - 1) || voxel(i, j - 1, k - 1);
        E += voxel(i, j, k) || voxel(i - 1, j, k) || voxel(i, j, k - 1) || voxel(i - 1, j, k - 1);
        E += voxel(i, j, k) || voxel(i - 1, j, k) || voxel(i, j - 1, k) || voxel(i - 1, j - 1, k);
        // Faces with this vertex as lowest corner, normal to x, y, z.
        F += voxel(i, j, k) || voxel(i - 1, j, k);
        F += voxel(i, j, k) || voxel(i, j - 1, k);
        F += voxel(i, j, k) || voxel(i, j, k - 1);
      }
  topo.euler_characteristic = static_cast<int>(V - E + F - C);

  bool axis_hit = false;
  for (int i = 0; i < n0; ++i) axis_hit = axis_hit || voxel(i, n1 / 2, n2 / 2);
  topo.ring = topo.components == 1 && topo.euler_characteristic == 0 && !axis_hit;
  return topo;
}

// ---------------------------------------------------------------------------
// MI-domain scan

std::string to_string(ScanClass c) {
  switch (c) {
    case ScanClass::fission: return "fission";
    case ScanClass::no_fission: return "no_fission";
    case ScanClass::no_growth: return "no_growth";
    case ScanClass::failed: return "failed";
  }
  return "unknown";
}

namespace {

ScanPoint scan_point(const ModelSpec& model, double kx, double ky, double epsilon, double t_max,
                     const ScanOptions& opt) {
  ScanPoint pt;
  pt.kx = kx;
  pt.ky = ky;
  try {
    if (model.dim != 2) throw std::invalid_argument("mi_domain_scan: a 2-dimensional model is required");
    const auto grid = make_grid({2.0 * kPi / kx, 2.0 * kPi / ky}, {opt.nx, opt.ny});
    const auto u0 = initialdata::build_doubly_periodic(epsilon, kx, ky, grid, model.eta1);
    SimulationConfig cfg;
    cfg.model = model;
    cfg.grid = grid;
    cfg.dt = opt.dt;
    cfg.t_end = t_max;
    cfg.conservation_cadence = 0;
    const int n_out = static_cast<int>(std::floor(t_max / opt.cadence + 1e-9));
    for (int i = 1; i <= n_out; ++i) cfg.output_times.push_back(std::min(t_max, i * opt.cadence));
    std::vector<PeakRecord> records;
    bool exceeded = false;
    solver::SplitStepSolver s(model, grid);
    const auto res = s.evolve(u0, cfg, [&](const ComplexField& f) {
      records.push_back(track_peaks(f, {opt.threshold, 1}));
      const double mx = records.back().max_modulus;
      pt.max_modulus = std::max(pt.max_modulus, mx);
      if (mx >= opt.threshold) exceeded = true;
      return !(exceeded && mx < opt.threshold);
    });
    if (res.status == solver::RunStatus::corrupt || res.status == solver::RunStatus::blow_up) {
      pt.classification = ScanClass::failed;
      pt.detail = res.message;
      return pt;
    }
    std::vector<double> ts, ms;
    for (const auto& r : records) {
      ts.push_back(r.time);
      ms.push_back(r.max_modulus);
    }
    if (!ts.empty()) pt.crest_time = first_crest_time(ts, ms, opt.threshold);
    if (!exceeded) {
      pt.classification = ScanClass::no_growth;
      pt.detail = "max|u| stayed below the threshold";
      return pt;
    }
    pt.events = detect_fission_fusion(records, {opt.threshold, opt.persistence, 3});
    const bool fission = std::any_of(pt.events.begin(), pt.events.end(),
                                     [](const DetectedEvent& e) { return e.kind == mae::EventKind::fission; });
    pt.classification = fission ? ScanClass::fission : ScanClass::no_fission;
  } catch (const std::exception& e) {
    pt.classification = ScanClass::failed;
    pt.detail = e.what();
  }
  return pt;
}

}  // namespace

std::vector<ScanPoint> mi_domain_scan(const ModelSpec& model, const std::vector<std::pair<double, double>>& k_points,
                                      double epsilon, double t_max, const ScanOptions& opt) {
  std::vector<ScanPoint> out(k_points.size());
  const int workers = std::max(1, std::min<int>(opt.workers, static_cast<int>(k_points.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < k_points.size(); i = next++)
      out[i] = scan_point(model, k_points[i].first, k_points[i].second, epsilon, t_max, opt);
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace roguewave::diagnostics
