#include "core/engine.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"
#include "core/parallel.hpp"

namespace pevmzi {

namespace {

constexpr double kTranslateLossLimit = 1e-9;

/// Deterministic 2D norm^2: per-row partial sums combined sequentially.
double norm_sq(const GridState& s) {
  const int nt = s.t_grid.count;
  const int nx = s.x_grid.count;
  std::vector<double> row(nt, 0.0);
  parallel_for(nt, [&](int it) {
    double acc = 0.0;
    for (int ix = 0; ix < nx; ++ix)
      acc += s.density(it, ix) * s.x_grid.weight(ix);
    row[it] = acc;
  });
  double total = 0.0;
  for (int it = 0; it < nt; ++it) total += row[it] * s.t_grid.weight(it);
  return total;
}

void shift_array(std::vector<std::complex<double>>& a, int nt, int nx, int kt,
                 int kx) {
  auto idx = [nx](int it, int ix) { return static_cast<size_t>(it) * nx + ix; };
  if (kt >= 0) {
    for (int it = nt - 1; it >= 0; --it) {
      int src_t = it - kt;
      if (src_t < 0) {
        std::fill(a.begin() + idx(it, 0), a.begin() + idx(it, 0) + nx,
                  std::complex<double>{0.0, 0.0});
        continue;
      }
      if (kx >= 0) {
        for (int ix = nx - 1; ix >= kx; --ix) a[idx(it, ix)] = a[idx(src_t, ix - kx)];
        for (int ix = 0; ix < kx; ++ix) a[idx(it, ix)] = {0.0, 0.0};
      } else {
        for (int ix = 0; ix < nx + kx; ++ix) a[idx(it, ix)] = a[idx(src_t, ix - kx)];
        for (int ix = nx + kx; ix < nx; ++ix) a[idx(it, ix)] = {0.0, 0.0};
      }
    }
  } else {
    for (int it = 0; it < nt; ++it) {
      int src_t = it - kt;
      if (src_t >= nt) {
        std::fill(a.begin() + idx(it, 0), a.begin() + idx(it, 0) + nx,
                  std::complex<double>{0.0, 0.0});
        continue;
      }
      if (kx >= 0) {
        for (int ix = nx - 1; ix >= kx; --ix) a[idx(it, ix)] = a[idx(src_t, ix - kx)];
        for (int ix = 0; ix < kx; ++ix) a[idx(it, ix)] = {0.0, 0.0};
      } else {
        for (int ix = 0; ix < nx + kx; ++ix) a[idx(it, ix)] = a[idx(src_t, ix - kx)];
        for (int ix = nx + kx; ix < nx; ++ix) a[idx(it, ix)] = {0.0, 0.0};
      }
    }
  }
}

} // namespace

GridState init_source(const AxisGrid& t_grid, const AxisGrid& x_grid,
                      const TemporalProfile& temporal,
                      const SpatialProfile& spatial) {
  if (temporal.grid != t_grid || spatial.grid != x_grid)
    throw InvalidArgument("profile grids do not match the state grids");
  GridState s;
  s.t_grid = t_grid;
  s.x_grid = x_grid;
  s.tau_label = "tau0";
  const int nt = t_grid.count;
  const int nx = x_grid.count;
  s.amp1.assign(static_cast<size_t>(nt) * nx, {0.0, 0.0});
  s.amp2.assign(static_cast<size_t>(nt) * nx, {0.0, 0.0});
  parallel_for(nt, [&](int it) {
    const std::complex<double> gt = temporal.samples[it];
    if (gt == std::complex<double>{0.0, 0.0}) return;
    for (int ix = 0; ix < nx; ++ix) s.a1(it, ix) = gt * spatial.samples[ix];
  });
  return s;
}

void translate(GridState& state, double alpha) {
  if (alpha == 0.0) return;
  if (!commensurate(alpha, state.t_grid.h) || !commensurate(alpha, state.x_grid.h)) {
    std::ostringstream os;
    os << "shift " << alpha << " is not a whole number of grid cells";
    throw ConfigError(os.str());
  }
  const int kt = cells_for(alpha, state.t_grid.h);
  const int kx = cells_for(alpha, state.x_grid.h);
  const int nt = state.t_grid.count;
  const int nx = state.x_grid.count;

  // Mass in cells about to leave the grid.
  double lost = 0.0;
  for (int it = 0; it < nt; ++it) {
    bool t_out = kt >= 0 ? (it + kt >= nt) : (it + kt < 0);
    double wt = state.t_grid.weight(it);
    for (int ix = 0; ix < nx; ++ix) {
      bool x_out = kx >= 0 ? (ix + kx >= nx) : (ix + kx < 0);
      if (t_out || x_out) lost += state.density(it, ix) * wt * state.x_grid.weight(ix);
    }
  }
  if (lost >= kTranslateLossLimit) {
    std::ostringstream os;
    os << "translation by " << alpha << " pushes mass " << lost
       << " off the grid (limit " << kTranslateLossLimit << ")";
    throw PhysicsError(os.str());
  }

  shift_array(state.amp1, nt, nx, kt, kx);
  shift_array(state.amp2, nt, nx, kt, kx);
}

void apply_beamsplitter(GridState& state, const SpacetimeRegion& region,
                        Splitter which) {
  if (region.empty()) return;
  const int nt = state.t_grid.count;
  const int nx = state.x_grid.count;
  const bool everywhere = region.is_all_spacetime();
  parallel_for(nt, [&](int it) {
    double t = state.t_grid.point(it);
    for (int ix = 0; ix < nx; ++ix) {
      if (!everywhere && !region.contains(t, state.x_grid.point(ix))) continue;
      ChannelVec v{state.a1(it, ix), state.a2(it, ix)};
      v = apply_bs(which, v);
      state.a1(it, ix) = v.c1;
      state.a2(it, ix) = v.c2;
    }
  });
}

void apply_mirrors(GridState& state, double kappa1, double kappa2) {
  const std::complex<double> e1 = std::polar(1.0, kappa1);
  const std::complex<double> e2 = std::polar(1.0, kappa2);
  const int nt = state.t_grid.count;
  const int nx = state.x_grid.count;
  parallel_for(nt, [&](int it) {
    for (int ix = 0; ix < nx; ++ix) {
      state.a1(it, ix) *= e1;
      state.a2(it, ix) *= e2;
    }
  });
}

double total_norm(const GridState& state) { return std::sqrt(norm_sq(state)); }

double normalize(GridState& state) {
  double norm = total_norm(state);
  if (!(norm > 1e-15)) {
    throw PhysicsError("evolution branch annihilated: state norm is " +
                       std::to_string(norm));
  }
  const double scale = 1.0 / norm;
  const int nt = state.t_grid.count;
  const int nx = state.x_grid.count;
  parallel_for(nt, [&](int it) {
    for (int ix = 0; ix < nx; ++ix) {
      state.a1(it, ix) *= scale;
      state.a2(it, ix) *= scale;
    }
  });
  return norm;
}

std::pair<GridState, StepLog> run_pipeline(const Scenario& scenario) {
  check_invariants(scenario);
  const Geometry& g = scenario.geometry;

  TemporalProfile temporal = build_temporal_profile(scenario);
  SpatialProfile spatial = build_spatial_profile(scenario);

  StepLog log;
  auto step = [&](GridState& s, const std::string& label, const std::string& op) {
    s.tau_label = label;
    double pre = normalize(s);
    log.steps.push_back({label, op, pre, total_norm(s)});
  };

  GridState s = init_source(scenario.t_grid, scenario.x_grid, temporal, spatial);
  step(s, "tau0", "source projection onto channel 1");

  auto shift_to = [&](GridState& st, double amount, const std::string& label,
                      const std::string& what) {
    translate(st, amount);
    std::ostringstream os;
    os << "free motion by " << amount << " to " << what;
    step(st, label, os.str());
  };

  shift_to(s, g.alpha_bs1(), "tau1", "BS1");
  apply_beamsplitter(s, scenario.bs1, Splitter::BS1);
  step(s, "tau2", "beamsplitter BS1 gated by its presence region");
  shift_to(s, g.alpha_mirrors() - g.alpha_bs1(), "tau3", "the mirrors");
  apply_mirrors(s, scenario.kappa1, scenario.kappa2);
  step(s, "tau4", "mirror phases");
  shift_to(s, g.alpha_bs2() - g.alpha_mirrors(), "tau5", "BS2");
  apply_beamsplitter(s, scenario.bs2, Splitter::BS2);
  step(s, "tau6", "beamsplitter BS2 gated by its presence region");
  shift_to(s, g.alpha_detectors() - g.alpha_bs2(), "tau7", "the detectors");

  return {std::move(s), std::move(log)};
}

std::pair<double, double> state_totals(const GridState& state) {
  const int nt = state.t_grid.count;
  const int nx = state.x_grid.count;
  std::vector<double> r1(nt, 0.0), r2(nt, 0.0);
  parallel_for(nt, [&](int it) {
    double a = 0.0, b = 0.0;
    for (int ix = 0; ix < nx; ++ix) {
      double w = state.x_grid.weight(ix);
      a += std::norm(state.a1(it, ix)) * w;
      b += std::norm(state.a2(it, ix)) * w;
    }
    r1[it] = a;
    r2[it] = b;
  });
  double p1 = 0.0, p2 = 0.0;
  for (int it = 0; it < nt; ++it) {
    p1 += r1[it] * state.t_grid.weight(it);
    p2 += r2[it] * state.t_grid.weight(it);
  }
  return {p1, p2};
}

std::vector<double> channel_time_density(const GridState& state, Detector det,
                                         double x_lo, double x_hi) {
  const int nt = state.t_grid.count;
  const int nx = state.x_grid.count;
  std::vector<double> out(nt, 0.0);
  std::vector<double> row(nx);
  if (x_lo <= state.x_grid.min && x_hi >= state.x_grid.max) {
    parallel_for(nt, [&](int it) {
      double acc = 0.0;
      for (int ix = 0; ix < nx; ++ix)
        acc += state.channel_density(det, it, ix) * state.x_grid.weight(ix);
      out[it] = acc;
    });
    return out;
  }
  for (int it = 0; it < nt; ++it) {
    for (int ix = 0; ix < nx; ++ix) row[ix] = state.channel_density(det, it, ix);
    out[it] = integrate_interval(state.x_grid, row, x_lo, x_hi);
  }
  return out;
}

void dump_state(const GridState& state, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open state dump file: " + path);
  char header[128];
  int n = std::snprintf(header, sizeof(header), "pev-mzi state v1 nt=%d nx=%d\n",
                        state.t_grid.count, state.x_grid.count);
  out.write(header, n);
  const int nt = state.t_grid.count;
  const int nx = state.x_grid.count;
  std::vector<double> rec(6);
  for (int it = 0; it < nt; ++it) {
    for (int ix = 0; ix < nx; ++ix) {
      const auto& a1 = state.a1(it, ix);
      const auto& a2 = state.a2(it, ix);
      rec[0] = state.t_grid.point(it);
      rec[1] = state.x_grid.point(ix);
      rec[2] = a1.real();
      rec[3] = a1.imag();
      rec[4] = a2.real();
      rec[5] = a2.imag();
      out.write(reinterpret_cast<const char*>(rec.data()), sizeof(double) * 6);
    }
  }
  if (!out) throw IoError("failed writing state dump: " + path);
}

} // namespace pevmzi
