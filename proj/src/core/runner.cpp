#include "core/runner.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "core/errors.hpp"
#include "core/parallel.hpp"

namespace pevmzi {

namespace {

DetectionCurve curve_from_state(const GridState& state, const Scenario& sc,
                                Detector det) {
  const DetectorSpec& d = sc.detector;
  double x_lo = sc.x_grid.min;
  double x_hi = sc.x_grid.max;
  if (!d.eps_x_full) {
    x_lo = sc.geometry.x_detectors - 0.5 * d.eps_x;
    x_hi = sc.geometry.x_detectors + 0.5 * d.eps_x;
  }
  std::vector<double> f_t = channel_time_density(state, det, x_lo, x_hi);
  DetectionCurve curve;
  curve.detector = det;
  curve.eps_t = d.eps_t;
  curve.eps_x = d.eps_x_full ? 0.0 : d.eps_x;
  int n = d.tbar_count();
  curve.points.resize(n);
  parallel_for(n, [&](int i) {
    double tb = d.tbar(i);
    double prob = integrate_interval(sc.t_grid, f_t, tb - 0.5 * d.eps_t,
                                     tb + 0.5 * d.eps_t);
    curve.points[i] = {tb, prob};
  });
  return curve;
}

double engine_vs_closed_discrepancy(const GridState& state, const ClosedForm& cf) {
  const int nt = state.t_grid.count;
  const int nx = state.x_grid.count;
  std::vector<double> row_max(nt, 0.0);
  parallel_for(nt, [&](int it) {
    double worst = 0.0;
    for (int ix = 0; ix < nx; ++ix) {
      double e1 = std::norm(state.a1(it, ix));
      double e2 = std::norm(state.a2(it, ix));
      worst = std::max(worst, std::abs(e1 - cf.density_at_node(Detector::D1, it, ix)));
      worst = std::max(worst, std::abs(e2 - cf.density_at_node(Detector::D2, it, ix)));
    }
    row_max[it] = worst;
  });
  double m = 0.0;
  for (double v : row_max) m = std::max(m, v);
  return m;
}

} // namespace

std::pair<double, double> totals_at_spacing(const Scenario& scenario,
                                            double h_scale) {
  Scenario coarse = scenario;
  coarse.t_grid = AxisGrid::from_range(scenario.t_grid.min, scenario.t_grid.max,
                                       scenario.t_grid.h * h_scale);
  coarse.x_grid = AxisGrid::from_range(scenario.x_grid.min, scenario.x_grid.max,
                                       scenario.x_grid.h * h_scale);
  return ClosedForm(coarse).total_probabilities();
}

RunOutputs run_scenario(const Scenario& scenario, RunMode mode) {
  auto start = std::chrono::steady_clock::now();
  check_invariants(scenario);

  RunOutputs out;
  out.digest_hex = digest(scenario);

  std::optional<ClosedForm> cf;
  if (mode == RunMode::ClosedForm || mode == RunMode::Both) {
    cf.emplace(scenario);
  }
  std::optional<GridState> state;
  if (mode == RunMode::Pipeline || mode == RunMode::Both) {
    auto [s, log] = run_pipeline(scenario);
    state = std::move(s);
    out.step_log = std::move(log);
  }

  if (cf.has_value()) {
    auto totals = cf->total_probabilities();
    out.p_d1 = totals.first;
    out.p_d2 = totals.second;
    out.curve_d1 = cf->detection_curve(Detector::D1);
    out.curve_d2 = cf->detection_curve(Detector::D2);
  } else {
    auto totals = state_totals(*state);
    out.p_d1 = totals.first;
    out.p_d2 = totals.second;
    out.curve_d1 = curve_from_state(*state, scenario, Detector::D1);
    out.curve_d2 = curve_from_state(*state, scenario, Detector::D2);
  }

  if (mode == RunMode::Both) {
    out.max_discrepancy = engine_vs_closed_discrepancy(*state, *cf);
  }

  // Convergence delta compares like with like: closed-form totals at h vs 2h.
  try {
    auto fine = cf.has_value() ? std::pair{out.p_d1, out.p_d2}
                               : ClosedForm(scenario).total_probabilities();
    auto coarse = totals_at_spacing(scenario, 2.0);
    out.convergence_delta_2h = std::max(std::abs(coarse.first - fine.first),
                                        std::abs(coarse.second - fine.second));
  } catch (const Error&) {
    out.convergence_delta_2h = std::numeric_limits<double>::quiet_NaN();
  }

  out.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return out;
}

} // namespace pevmzi
