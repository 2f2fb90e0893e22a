#include "doctest.h"

#include <cmath>
#include <random>

#include "core/closed_form.hpp"
#include "core/errors.hpp"
#include "core/oracle.hpp"
#include "core/runner.hpp"

using namespace pevmzi;

namespace {

DetectorWindow full_window(const Scenario& s) {
  DetectorWindow w;
  w.t_bar = 0.5 * (s.t_grid.min + s.t_grid.max);
  w.eps_t = s.t_grid.span();
  w.eps_x_full = true;
  return w;
}

} // namespace

TEST_CASE("pointwise density: dark D2, pass-through D1, branch completeness") {
  ClosedForm both(preset("baseline-both"));
  for (double t : {12.0, 18.5, 20.0, 23.25, 27.0}) {
    CHECK(both.final_density(Detector::D2, t, 20.0) == 0.0);
  }

  ClosedForm none(preset("baseline-none"));
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> pos(-19.0, 39.0);
  for (int i = 0; i < 200; ++i) {
    double t = pos(rng), x = pos(rng);
    int it = none.scenario().t_grid.index_near(t);
    int ix = none.scenario().x_grid.index_near(x);
    CHECK(none.final_density(Detector::D1, t, x) ==
          doctest::Approx(none.gamma_density_at_node(it, ix)).epsilon(1e-14));
    CHECK(none.final_density(Detector::D2, t, x) == 0.0);
  }

  for (const auto& name : preset_names()) {
    ClosedForm cf{preset(name)};
    for (int i = 0; i < 1000; ++i) {
      double t = pos(rng), x = pos(rng);
      double d1 = cf.final_density(Detector::D1, t, x);
      double d2 = cf.final_density(Detector::D2, t, x);
      int it = cf.scenario().t_grid.index_near(t);
      int ix = cf.scenario().x_grid.index_near(x);
      CHECK(std::abs(d1 + d2 - cf.gamma_density_at_node(it, ix)) <= 1e-12);
    }
  }

  CHECK_THROWS_AS(both.final_density(Detector::D1, 100.0, 0.0), InvalidArgument);
}

TEST_CASE("detection probabilities over the whole grid") {
  {
    ClosedForm cf(preset("baseline-bs1-only"));
    CHECK(cf.detection_probability(Detector::D1, full_window(cf.scenario())) ==
          doctest::Approx(0.5).epsilon(1e-4));
    CHECK(cf.detection_probability(Detector::D2, full_window(cf.scenario())) ==
          doctest::Approx(0.5).epsilon(1e-4));
  }
  {
    ClosedForm cf(preset("baseline-none"));
    CHECK(cf.detection_probability(Detector::D2, full_window(cf.scenario())) == 0.0);
  }
  {
    // Gaussian photon, late BS2 window: the mixed mass is the window overlap
    // and D2 collects half of it.
    Scenario s1 = preset("scenario1");
    ClosedForm cf(s1);
    auto q = oracle::overlap_fraction(TemporalKind::Gaussian, 1.0, 15.0, 18.0, 21.0);
    double p2 = cf.detection_probability(Detector::D2, full_window(s1));
    CHECK(std::abs(p2 - 0.5 * q.value) < q.estimated_error + 1e-6);
  }

  CHECK_THROWS_AS(ClosedForm(preset("baseline-none"))
                      .detection_probability(Detector::D1,
                                             DetectorWindow{100.0, 0.0, 1.0, 0.0, true}),
                  InvalidArgument);
}

TEST_CASE("detection probability is additive over disjoint windows") {
  ClosedForm cf(preset("scenario1"));
  auto prob = [&](double lo, double hi) {
    DetectorWindow w{0.5 * (lo + hi), 20.0, hi - lo, 0.0, true};
    return cf.detection_probability(Detector::D2, w);
  };
  double whole = prob(20.0, 30.0);
  double parts = prob(20.0, 23.3) + prob(23.3, 26.001) + prob(26.001, 30.0);
  CHECK(std::abs(whole - parts) <= 1e-9);
}

TEST_CASE("detection curves") {
  {
    ClosedForm cf(preset("baseline-both"));
    DetectionCurve d1 = cf.detection_curve(Detector::D1);
    REQUIRE(d1.points.size() == 201);
    int peak = 0;
    for (size_t i = 0; i < d1.points.size(); ++i)
      if (d1.points[i].prob > d1.points[peak].prob) peak = static_cast<int>(i);
    CHECK(std::abs(d1.points[peak].t_bar - 20.0) <= 0.1 + 1e-12);
  }
  {
    // D2 only fires once the carried BS2 window opens at t = 23.
    ClosedForm cf(preset("scenario1"));
    DetectionCurve d2 = cf.detection_curve(Detector::D2);
    for (const auto& pt : d2.points) {
      if (pt.t_bar + 0.05 < 23.0) {
        CHECK(pt.prob <= 1e-12);
      }
      if (pt.t_bar - 0.05 > 26.0) {
        CHECK(pt.prob <= 1e-12);
      }
    }
    double total = 0.0;
    for (const auto& pt : d2.points) total += pt.prob;
    CHECK(total > 0.0);
  }
  {
    // Tiling windows: the curve sums to the full detection probability.
    for (const char* name : {"baseline-both", "baseline-bs1-only", "scenario1",
                             "scenario2-forward"}) {
      ClosedForm cf(preset(name));
      DetectionCurve d1 = cf.detection_curve(Detector::D1, 0.05, 39.95, 0.1, 0.1,
                                             0.0, true);
      DetectionCurve d2 = cf.detection_curve(Detector::D2, 0.05, 39.95, 0.1, 0.1,
                                             0.0, true);
      double sum = 0.0;
      for (const auto& pt : d1.points) sum += pt.prob;
      double cum2 = 0.0;
      for (const auto& pt : d2.points) {
        cum2 += pt.prob;
        CHECK(pt.prob >= 0.0);
      }
      CHECK(sum + cum2 == doctest::Approx(1.0).epsilon(1e-3));
      CHECK(sum <= 1.0 + 1e-6);
      CHECK(cum2 <= 1.0 + 1e-6);
    }
  }
}

TEST_CASE("totals for the baseline setups and the backward-tail variant") {
  {
    auto [p1, p2] = ClosedForm(preset("baseline-both")).total_probabilities();
    CHECK(std::abs(p1 - 1.0) < 1e-6);
    CHECK(p2 == 0.0); // cos(0) branch weight vanishes identically
  }
  {
    auto [p1, p2] = ClosedForm(preset("baseline-bs2-only")).total_probabilities();
    CHECK(std::abs(p1 - 0.5) < 1e-6);
    CHECK(std::abs(p2 - 0.5) < 1e-6);
  }
  {
    // The backward tail ends at its nominal arrival; the late BS2 window
    // never mixes, so D2 stays exactly silent.
    auto [p1, p2] = ClosedForm(preset("scenario2-backward")).total_probabilities();
    CHECK(p2 == 0.0);
    CHECK(std::abs(p1 - 1.0) < 1e-6);
  }
  {
    // The forward tail does reach into the same window.
    Scenario s = preset("scenario2-forward");
    auto q2 = oracle::overlap_fraction(TemporalKind::ExpForward, 1.0, 15.0, 16.5, 19.5);
    auto [p1, p2] = ClosedForm(s).total_probabilities();
    CHECK(p2 > 0.0);
    CHECK(std::abs(p2 - 0.5 * q2.value) < q2.estimated_error + 1e-4);
    CHECK(p1 + p2 == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("gaussian photon is time-symmetric about its arrival") {
  for (auto [a, b] : {std::pair{1.0, 2.0}, std::pair{3.0, 6.0}, std::pair{0.0, 5.0}}) {
    Scenario fwd = preset("baseline-none");
    set_param(fwd, "bs2.present_t",
              std::to_string(15.0 + a) + ":" + std::to_string(15.0 + b));
    Scenario bwd = preset("baseline-none");
    set_param(bwd, "bs2.present_t",
              std::to_string(15.0 - b) + ":" + std::to_string(15.0 - a));
    auto pf = ClosedForm(fwd).total_probabilities();
    auto pb = ClosedForm(bwd).total_probabilities();
    CHECK(std::abs(pf.second - pb.second) <= 1e-9);
  }
}

TEST_CASE("growing a presence window never loses mixed mass") {
  double prev = -1.0;
  for (auto [lo, hi] : {std::pair{18.0, 21.0}, std::pair{17.0, 22.0},
                        std::pair{15.0, 26.0}, std::pair{10.0, 30.0}}) {
    Scenario s = preset("scenario1");
    set_param(s, "bs2.present_t", std::to_string(lo) + ":" + std::to_string(hi));
    double p2 = ClosedForm(s).total_probabilities().second;
    CHECK(p2 >= prev - 1e-15);
    prev = p2;
  }
}

TEST_CASE("piecewise and dense quadratures agree") {
  // No region edges inside the window: both integrators see one piece.
  {
    ClosedForm cf(preset("baseline-bs1-only"));
    DetectorWindow w{20.0, 20.0, 4.0, 0.0, true}; // node-aligned edges
    double piecewise = cf.detection_probability(Detector::D1, w);
    double dense = cf.detection_probability_dense(Detector::D1, w);
    CHECK(std::abs(piecewise - dense) <= 1e-12);
  }
  // With a region edge inside the window the dense path differs only by the
  // half-cell attribution at the edge node.
  {
    ClosedForm cf(preset("scenario1"));
    DetectorWindow w{23.5, 20.0, 3.0, 0.0, true};
    double piecewise = cf.detection_probability(Detector::D2, w);
    double dense = cf.detection_probability_dense(Detector::D2, w);
    double h = cf.scenario().t_grid.h;
    double edge_density = cf.final_density(Detector::D2, 23.0, 20.0);
    CHECK(std::abs(piecewise - dense) <= h * edge_density + 1e-12);
  }
}

TEST_CASE("finite beamsplitter slabs gate in space as well") {
  Scenario wide = parse_config(
      "[bs2]\npresent_t = 18:21\nextent_x = -10:30\n");
  Scenario narrow = parse_config(
      "[bs2]\npresent_t = 18:21\nextent_x = 14.9:15.1\n");
  Scenario unbounded = preset("scenario1");

  double p_wide = ClosedForm(wide).total_probabilities().second;
  double p_narrow = ClosedForm(narrow).total_probabilities().second;
  double p_unbounded = ClosedForm(unbounded).total_probabilities().second;

  // The wide slab covers the photon's whole spatial box: same answer.
  CHECK(std::abs(p_wide - p_unbounded) <= 1e-12);
  // The thin slab intersects a tenth of the spatial box.
  CHECK(p_narrow < p_wide);
  CHECK(p_narrow == doctest::Approx(0.1 * p_wide).epsilon(1e-2));

  // The dense path handles the slab the same way.
  ClosedForm cf(narrow);
  DetectorWindow w = full_window(narrow);
  CHECK(std::abs(cf.detection_probability(Detector::D2, w) - p_narrow) <= 1e-15);
  double dense = cf.detection_probability_dense(Detector::D2, w);
  CHECK(dense == doctest::Approx(p_narrow).epsilon(0.05));
}

TEST_CASE("engine and closed form agree pointwise on a coarse grid") {
  for (const auto& name : preset_names()) {
    Scenario s = preset(name);
    s.t_grid = AxisGrid::from_range(-20.0, 40.0, 0.25);
    s.x_grid = AxisGrid::from_range(-20.0, 40.0, 0.25);
    RunOutputs out = run_scenario(s, RunMode::Both);
    REQUIRE(out.max_discrepancy.has_value());
    CHECK(*out.max_discrepancy <= 1e-8);
  }
}

TEST_CASE("run outputs carry digest, curves, and a convergence delta") {
  Scenario s = preset("scenario1");
  RunOutputs out = run_scenario(s, RunMode::ClosedForm);
  CHECK(out.digest_hex == digest(s));
  CHECK(out.curve_d1.points.size() == static_cast<size_t>(s.detector.tbar_count()));
  CHECK(std::isfinite(out.convergence_delta_2h));
  CHECK(out.convergence_delta_2h < 1e-4);
  CHECK(out.p_d1 + out.p_d2 == doctest::Approx(1.0).epsilon(1e-3));
  CHECK_FALSE(out.step_log.has_value());

  RunOutputs piped = run_scenario(s, RunMode::Pipeline);
  CHECK(piped.step_log.has_value());
  CHECK(std::abs(piped.p_d1 - out.p_d1) < 1e-3);
}
