#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "core/channel_optics.hpp"
#include "core/grid.hpp"
#include "core/profiles.hpp"
#include "core/regions.hpp"
#include "core/scenarios.hpp"

namespace pevmzi {

/// Audit record of one evolution step: the norm found before renormalizing is
/// the survival probability of that step (1 for unitary operators).
struct StepRecord {
  std::string tau_label;
  std::string op;
  double pre_norm = 0.0;
  double post_norm = 0.0;
};

struct StepLog {
  std::vector<StepRecord> steps;
};

/// Two-channel complex amplitude field on the (t, x) grid, row-major in t.
struct GridState {
  AxisGrid t_grid;
  AxisGrid x_grid;
  std::vector<std::complex<double>> amp1;
  std::vector<std::complex<double>> amp2;
  std::string tau_label;

  size_t index(int it, int ix) const {
    return static_cast<size_t>(it) * x_grid.count + ix;
  }
  std::complex<double>& a1(int it, int ix) { return amp1[index(it, ix)]; }
  std::complex<double>& a2(int it, int ix) { return amp2[index(it, ix)]; }
  const std::complex<double>& a1(int it, int ix) const { return amp1[index(it, ix)]; }
  const std::complex<double>& a2(int it, int ix) const { return amp2[index(it, ix)]; }

  /// |amp1|^2 + |amp2|^2 at a node.
  double density(int it, int ix) const {
    return std::norm(a1(it, ix)) + std::norm(a2(it, ix));
  }
  double channel_density(Detector det, int it, int ix) const {
    return det == Detector::D1 ? std::norm(a1(it, ix)) : std::norm(a2(it, ix));
  }
};

/// Product state gamma_t(t) * gamma_x(x) in channel 1, normalized.
GridState init_source(const AxisGrid& t_grid, const AxisGrid& x_grid,
                      const TemporalProfile& temporal,
                      const SpatialProfile& spatial);

/// Diagonal worldline shift by alpha (both axes). alpha must be a whole
/// number of cells on each axis; mass about to leave the grid must be below
/// 1e-9 or the shift is refused.
void translate(GridState& state, double alpha);

/// Channel mixing applied only where the region is present.
void apply_beamsplitter(GridState& state, const SpacetimeRegion& region,
                        Splitter which);

/// Global per-arm phases.
void apply_mirrors(GridState& state, double kappa1, double kappa2);

/// Trapezoid-rule total norm (2D).
double total_norm(const GridState& state);

/// Rescales to unit norm; returns the pre-normalization norm.
/// A norm at numerical zero means the evolution branch has probability zero.
double normalize(GridState& state);

/// The full source-to-detectors operator sequence for a scenario.
std::pair<GridState, StepLog> run_pipeline(const Scenario& scenario);

/// Integrated channel probabilities of a final state.
std::pair<double, double> state_totals(const GridState& state);

/// Per-t density of one channel with the x axis integrated over
/// [x_lo, x_hi] (pass the grid bounds for the full axis).
std::vector<double> channel_time_density(const GridState& state, Detector det,
                                         double x_lo, double x_hi);

/// Binary state dump; see README for the layout.
void dump_state(const GridState& state, const std::string& path);

} // namespace pevmzi
