#include "core/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/errors.hpp"
#include "core/parallel.hpp"

namespace pevmzi {

namespace {

/// Marginal density at the detector step: profile samples index-shifted by
/// `cells`, renormalized to unit mass over the grid (matching the engine's
/// per-step normalization of any mass the shift pushed off the grid).
std::vector<double> shifted_density(const AmplitudeProfile& prof, int cells) {
  const AxisGrid& g = prof.grid;
  std::vector<double> f(g.count, 0.0);
  double kept = 0.0;
  for (int i = 0; i < g.count; ++i) {
    int src = i - cells;
    if (src < 0 || src >= g.count) continue;
    f[i] = prof.magnitude_sq(src);
    kept += f[i] * g.weight(i);
  }
  if (!(kept > 1e-30))
    throw PhysicsError("profile mass vanishes after the detector-step shift");
  double inv = 1.0 / kept;
  for (double& v : f) v *= inv;
  return f;
}

std::vector<double> pieces_between(double lo, double hi,
                                   const std::vector<double>& edges) {
  std::vector<double> cuts;
  cuts.push_back(lo);
  for (double e : edges)
    if (e > lo && e < hi) cuts.push_back(e);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

} // namespace

ClosedForm::ClosedForm(const Scenario& scenario)
    : scenario_(scenario),
      temporal_(build_temporal_profile(scenario)),
      spatial_(build_spatial_profile(scenario)) {
  check_invariants(scenario_);
  const Geometry& g = scenario_.geometry;
  const double a7 = g.alpha_detectors();
  const double from_bs1 = a7 - g.alpha_bs1();
  const double from_bs2 = a7 - g.alpha_bs2();

  shift_t_ = cells_for(a7, scenario_.t_grid.h);
  shift_x_ = cells_for(a7, scenario_.x_grid.h);
  bs1_back_t_ = cells_for(from_bs1, scenario_.t_grid.h);
  bs1_back_x_ = cells_for(from_bs1, scenario_.x_grid.h);
  bs2_back_t_ = cells_for(from_bs2, scenario_.t_grid.h);
  bs2_back_x_ = cells_for(from_bs2, scenario_.x_grid.h);

  bs1_at_det_ = scenario_.bs1.shifted(from_bs1);
  bs2_at_det_ = scenario_.bs2.shifted(from_bs2);

  ft_ = shifted_density(temporal_, shift_t_);
  fx_ = shifted_density(spatial_, shift_x_);
}

BranchKey ClosedForm::key_at_node(int it, int ix) const {
  const AxisGrid& tg = scenario_.t_grid;
  const AxisGrid& xg = scenario_.x_grid;
  auto member = [&](const SpacetimeRegion& region, int bt, int bx) {
    int i = it - bt;
    int j = ix - bx;
    // Coordinates the mass had when the element could act on it; outside the
    // grid the amplitude is zero and the key is irrelevant.
    double t = tg.point(std::clamp(i, 0, tg.count - 1));
    double x = xg.point(std::clamp(j, 0, xg.count - 1));
    return region.contains(t, x);
  };
  return {member(scenario_.bs1, bs1_back_t_, bs1_back_x_),
          member(scenario_.bs2, bs2_back_t_, bs2_back_x_)};
}

BranchKey ClosedForm::key_at_point(double t, double x) const {
  return {bs1_at_det_.contains(t, x), bs2_at_det_.contains(t, x)};
}

double ClosedForm::gamma_density_at_node(int it, int ix) const {
  return ft_[it] * fx_[ix];
}

double ClosedForm::density_at_node(Detector det, int it, int ix) const {
  double gamma2 = ft_[it] * fx_[ix];
  if (gamma2 == 0.0) return 0.0;
  return gamma2 *
         branch_coefficient(key_at_node(it, ix), det, scenario_.kappa1, scenario_.kappa2);
}

double ClosedForm::final_density(Detector det, double t, double x) const {
  if (!scenario_.t_grid.contains(t) || !scenario_.x_grid.contains(x)) {
    std::ostringstream os;
    os << "point (" << t << ", " << x << ") is outside the grid";
    throw InvalidArgument(os.str());
  }
  return density_at_node(det, scenario_.t_grid.index_near(t),
                         scenario_.x_grid.index_near(x));
}

double ClosedForm::detection_probability(Detector det,
                                         const DetectorWindow& w) const {
  const AxisGrid& tg = scenario_.t_grid;
  const AxisGrid& xg = scenario_.x_grid;

  double t_lo = w.t_bar - 0.5 * w.eps_t;
  double t_hi = w.t_bar + 0.5 * w.eps_t;
  double x_lo = w.eps_x_full ? xg.min : w.x_bar - 0.5 * w.eps_x;
  double x_hi = w.eps_x_full ? xg.max : w.x_bar + 0.5 * w.eps_x;
  if (t_hi <= tg.min || t_lo >= tg.max || x_hi <= xg.min || x_lo >= xg.max) {
    if (t_lo > tg.max || t_hi < tg.min || x_lo > xg.max || x_hi < xg.min)
      throw InvalidArgument("detection window lies outside the grid");
    return 0.0;
  }
  t_lo = std::max(t_lo, tg.min);
  t_hi = std::min(t_hi, tg.max);
  x_lo = std::max(x_lo, xg.min);
  x_hi = std::min(x_hi, xg.max);

  std::vector<double> t_edges;
  std::vector<double> x_edges;
  for (const SpacetimeRegion* r : {&bs1_at_det_, &bs2_at_det_}) {
    for (double e : r->t_edges()) t_edges.push_back(e);
    for (double e : r->x_edges()) x_edges.push_back(e);
  }
  std::vector<double> t_cuts = pieces_between(t_lo, t_hi, t_edges);
  std::vector<double> x_cuts = pieces_between(x_lo, x_hi, x_edges);

  // Branch keys are constant on each rectangle between consecutive cuts, so
  // the separable density integrates piece by piece as a product.
  double total = 0.0;
  for (size_t a = 0; a + 1 < t_cuts.size(); ++a) {
    double ta = t_cuts[a], tb = t_cuts[a + 1];
    double it_piece = integrate_interval(tg, ft_, ta, tb);
    if (it_piece == 0.0) continue;
    double tm = 0.5 * (ta + tb);
    for (size_t b = 0; b + 1 < x_cuts.size(); ++b) {
      double xa = x_cuts[b], xb = x_cuts[b + 1];
      double ix_piece = integrate_interval(xg, fx_, xa, xb);
      if (ix_piece == 0.0) continue;
      double xm = 0.5 * (xa + xb);
      double wgt = branch_coefficient(key_at_point(tm, xm), det, scenario_.kappa1,
                                      scenario_.kappa2);
      total += wgt * it_piece * ix_piece;
    }
  }
  return total;
}

double ClosedForm::detection_probability_dense(Detector det,
                                               const DetectorWindow& w) const {
  const AxisGrid& tg = scenario_.t_grid;
  const AxisGrid& xg = scenario_.x_grid;
  double t_lo = std::max(w.t_bar - 0.5 * w.eps_t, tg.min);
  double t_hi = std::min(w.t_bar + 0.5 * w.eps_t, tg.max);
  double x_lo = w.eps_x_full ? xg.min : std::max(w.x_bar - 0.5 * w.eps_x, xg.min);
  double x_hi = w.eps_x_full ? xg.max : std::min(w.x_bar + 0.5 * w.eps_x, xg.max);
  if (!(t_hi > t_lo) || !(x_hi > x_lo)) return 0.0;

  int i0 = static_cast<int>(std::ceil((t_lo - tg.min) / tg.h - 1e-12));
  int i1 = static_cast<int>(std::floor((t_hi - tg.min) / tg.h + 1e-12));
  int j0 = static_cast<int>(std::ceil((x_lo - xg.min) / xg.h - 1e-12));
  int j1 = static_cast<int>(std::floor((x_hi - xg.min) / xg.h + 1e-12));

  double total = 0.0;
  for (int i = std::max(i0, 0); i <= std::min(i1, tg.count - 1); ++i) {
    double wt = (i == i0 || i == i1) ? 0.5 * tg.h : tg.h;
    double rowsum = 0.0;
    for (int j = std::max(j0, 0); j <= std::min(j1, xg.count - 1); ++j) {
      double wx = (j == j0 || j == j1) ? 0.5 * xg.h : xg.h;
      double gamma2 = ft_[i] * fx_[j];
      if (gamma2 == 0.0) continue;
      double t = tg.point(i);
      double x = xg.point(j);
      rowsum += gamma2 *
                branch_coefficient(key_at_point(t, x), det, scenario_.kappa1,
                                   scenario_.kappa2) *
                wx;
    }
    total += rowsum * wt;
  }
  return total;
}

DetectionCurve ClosedForm::detection_curve(Detector det) const {
  const DetectorSpec& d = scenario_.detector;
  return detection_curve(det, d.tbar_min, d.tbar_max, d.tbar_step, d.eps_t,
                         d.eps_x, d.eps_x_full);
}

DetectionCurve ClosedForm::detection_curve(Detector det, double tbar_min,
                                           double tbar_max, double tbar_step,
                                           double eps_t, double eps_x,
                                           bool eps_x_full) const {
  if (!(tbar_step > 0.0) || !(tbar_max >= tbar_min))
    throw InvalidArgument("detection curve range must satisfy min <= max, step > 0");
  int n = static_cast<int>(std::lround((tbar_max - tbar_min) / tbar_step)) + 1;
  DetectionCurve curve;
  curve.detector = det;
  curve.eps_t = eps_t;
  curve.eps_x = eps_x_full ? 0.0 : eps_x;
  curve.points.resize(n);
  const double x_bar = scenario_.geometry.x_detectors;
  parallel_for(n, [&](int i) {
    double tb = tbar_min + i * tbar_step;
    DetectorWindow w{tb, x_bar, eps_t, eps_x, eps_x_full};
    curve.points[i] = {tb, detection_probability(det, w)};
  });
  return curve;
}

std::pair<double, double> ClosedForm::total_probabilities() const {
  DetectorWindow full;
  full.t_bar = 0.5 * (scenario_.t_grid.min + scenario_.t_grid.max);
  full.eps_t = scenario_.t_grid.span();
  full.x_bar = 0.0;
  full.eps_x_full = true;
  return {detection_probability(Detector::D1, full),
          detection_probability(Detector::D2, full)};
}

} // namespace pevmzi
