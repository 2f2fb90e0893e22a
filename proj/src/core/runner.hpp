#pragma once

#include <optional>
#include <string>
#include <utility>

#include "core/closed_form.hpp"
#include "core/engine.hpp"
#include "core/scenarios.hpp"

namespace pevmzi {

enum class RunMode { ClosedForm, Pipeline, Both };

/// Everything a single scenario run produces. Totals and curves come from
/// the closed form in ClosedForm/Both mode and from the final engine state
/// in Pipeline mode.
struct RunOutputs {
  std::string digest_hex;
  double p_d1 = 0.0;
  double p_d2 = 0.0;
  DetectionCurve curve_d1;
  DetectionCurve curve_d2;
  std::optional<StepLog> step_log;
  /// Both mode only: max pointwise |engine - closed form| channel density.
  std::optional<double> max_discrepancy;
  /// Totals drift when the grid is coarsened to 2h (NaN if 2h is unusable).
  double convergence_delta_2h = 0.0;
  double wall_ms = 0.0;
};

RunOutputs run_scenario(const Scenario& scenario, RunMode mode);

/// Totals at a modified spacing (profiles rebuilt, closed form only).
std::pair<double, double> totals_at_spacing(const Scenario& scenario, double h_scale);

} // namespace pevmzi
