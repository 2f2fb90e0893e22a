#pragma once

#include <utility>
#include <vector>

#include "core/channel_optics.hpp"
#include "core/grid.hpp"
#include "core/profiles.hpp"
#include "core/regions.hpp"
#include "core/scenarios.hpp"

namespace pevmzi {

/// Detection window centered at (t_bar, x_bar) with widths eps_t, eps_x.
struct DetectorWindow {
  double t_bar = 0.0;
  double x_bar = 0.0;
  double eps_t = 0.1;
  double eps_x = 0.0;
  bool eps_x_full = true;
};

struct CurvePoint {
  double t_bar = 0.0;
  double prob = 0.0;
};

struct DetectionCurve {
  Detector detector = Detector::D1;
  std::vector<CurvePoint> points;
  double eps_t = 0.0;
  double eps_x = 0.0; // 0 means full axis
};

/// Direct evaluation of the detection-time density: the source profile
/// carried to the detector step times the four-branch interference weight.
/// This is the fast path and the cross-check for the step-operator engine.
class ClosedForm {
public:
  explicit ClosedForm(const Scenario& scenario);

  const Scenario& scenario() const { return scenario_; }

  /// Detector-k density at a spacetime point (snapped to the nearest node).
  double final_density(Detector det, double t, double x) const;

  /// Exact-node density; index-shifted membership matches the engine's
  /// gating cell for cell, so engine comparisons are bit-faithful.
  double density_at_node(Detector det, int it, int ix) const;

  /// |gamma|^2 at a node in the detection frame (branch weights excluded).
  double gamma_density_at_node(int it, int ix) const;

  /// Probability of firing detector `det` within the window. Piecewise
  /// trapezoid: the integration domain is split at window and presence-region
  /// edges so each piece carries one interference branch.
  double detection_probability(Detector det, const DetectorWindow& w) const;

  /// Naive per-node quadrature of final_density over the window; slower
  /// reference path for the piecewise integrator.
  double detection_probability_dense(Detector det, const DetectorWindow& w) const;

  /// Probability-vs-detection-time curve at x_bar = detector position.
  DetectionCurve detection_curve(Detector det) const;
  DetectionCurve detection_curve(Detector det, double tbar_min, double tbar_max,
                                 double tbar_step, double eps_t, double eps_x,
                                 bool eps_x_full) const;

  /// Full-grid (p_D1, p_D2).
  std::pair<double, double> total_probabilities() const;

  const TemporalProfile& temporal() const { return temporal_; }
  const SpatialProfile& spatial() const { return spatial_; }

private:
  BranchKey key_at_node(int it, int ix) const;
  BranchKey key_at_point(double t, double x) const;

  Scenario scenario_;
  TemporalProfile temporal_;
  SpatialProfile spatial_;
  // Detector-step shifts in cells (t axis and x axis can differ in h).
  int shift_t_ = 0, shift_x_ = 0;        // source -> detectors
  int bs1_back_t_ = 0, bs1_back_x_ = 0;  // detectors -> BS1 step
  int bs2_back_t_ = 0, bs2_back_x_ = 0;  // detectors -> BS2 step
  // Presence regions carried forward to the detection frame.
  SpacetimeRegion bs1_at_det_;
  SpacetimeRegion bs2_at_det_;
  // Marginal densities at the detector step, each integrating to one.
  std::vector<double> ft_;
  std::vector<double> fx_;
};

} // namespace pevmzi
