#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "core/errors.hpp"
#include "core/scenarios.hpp"

using namespace pevmzi;

TEST_CASE("presets carry the documented setups") {
  Scenario both = preset("baseline-both");
  CHECK(both.bs1.is_all_spacetime());
  CHECK(both.bs2.is_all_spacetime());
  CHECK(both.kappa1 == doctest::Approx(3.14159265358979323846));
  CHECK(both.kappa2 == both.kappa1);
  CHECK(both.photon.omega_t == 1.0);
  CHECK(both.photon.omega_x == 2.0);

  Scenario s1 = preset("scenario1");
  CHECK(s1.bs1.empty());
  REQUIRE(s1.bs2.rects.size() == 1);
  CHECK(s1.bs2.rects[0].t_lo == 18.0);
  CHECK(s1.bs2.rects[0].t_hi == 21.0);
  CHECK(s1.photon.temporal == TemporalKind::Gaussian);

  Scenario s2f = preset("scenario2-forward");
  CHECK(s2f.photon.temporal == TemporalKind::ExpForward);
  CHECK(s2f.bs1.rects[0].t_lo == 1.5);
  CHECK(s2f.bs1.rects[0].t_hi == 4.5);
  CHECK(s2f.bs2.rects[0].t_lo == 16.5);
  CHECK(s2f.bs2.rects[0].t_hi == 19.5);

  Scenario s2b = preset("scenario2-backward");
  CHECK(s2b.photon.temporal == TemporalKind::ExpBackward);
  CHECK(s2b.bs1.empty());
  CHECK(s2b.bs2.rects[0].t_lo == 16.5);

  Scenario s3 = preset("scenario3");
  CHECK(s3.bs1.rects[0].t_lo == 6.5);
  CHECK(s3.bs1.rects[0].t_hi == 7.5);
  CHECK(s3.bs2.rects[0].t_lo == 6.5);
  CHECK(s3.bs2.rects[0].t_hi == 9.5);

  CHECK_THROWS_AS(preset("scenario9"), ConfigError);
  CHECK(preset_names().size() == 9);
}

TEST_CASE("preset geometry fixes the closed-form shifts") {
  Scenario s = preset("baseline-none");
  CHECK(s.geometry.alpha_detectors() - s.geometry.alpha_bs1() == doctest::Approx(15.0));
  CHECK(s.geometry.alpha_detectors() - s.geometry.alpha_bs2() == doctest::Approx(5.0));
  CHECK(s.photon.t0 == 0.0);
  CHECK(s.photon.x0 == 0.0);
}

TEST_CASE("minimal config equals the scenario1 preset field by field") {
  Scenario parsed = parse_config("[bs2]\npresent_t = 18:21\n");
  Scenario expected = preset("scenario1");
  CHECK(parsed == expected);
}

TEST_CASE("config parsing details") {
  Scenario s = parse_config("[mirrors]\nkappa1 = 3.14159\n");
  CHECK(s.kappa1 == doctest::Approx(3.14159).epsilon(1e-12));

  CHECK_THROWS_WITH_AS(parse_config("[bs2]\npresent_t = 21:18\n"),
                       doctest::Contains("lo must be below hi"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("[bs2]\nwidth = 3\n"),
                       doctest::Contains("unknown key"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("[beam]\nx = 1\n"),
                       doctest::Contains("unknown section"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("kappa1 = 1\n"),
                       doctest::Contains("outside any section"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("[mirrors]\nkappa1 = 1\nkappa1 = 2\n"),
                       doctest::Contains("duplicate"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("[mirrors]\nkappa1 = pi\n"),
                       doctest::Contains("not a number"), ConfigError);
  // Line numbers point at the offender.
  CHECK_THROWS_WITH_AS(parse_config("[mirrors]\n\nkappa1 = bad\n"),
                       doctest::Contains("line 3"), ConfigError);

  // Geometry ordering and commensurability are enforced.
  CHECK_THROWS_AS(parse_config("[geometry]\nx_bs1 = 12\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid]\nt = -20:40:0.03\n"), ConfigError);
}

TEST_CASE("config round-trips through render exactly") {
  for (const auto& name : preset_names()) {
    Scenario s = preset(name);
    Scenario back = parse_config(render_config(s));
    CHECK(back == s);
  }

  // Including non-default extras: extent, finite eps_x, offsets.
  Scenario custom = parse_config(
      "[photon]\ntemporal = box\nspatial = box\ndelta_t = 3\nt0 = 1\nx0 = 1\n"
      "[bs1]\npresent_t = 6.5:7.5, 9:12\nextent_x = 0:30\n"
      "[detector]\neps_x = 2.5\ntbar = 12:28:0.25\n"
      "[grid]\nt = -19:41:0.02\nx = -19:41:0.02\n"
      "[geometry]\nx_source = 1\nx_bs1 = 6\nx_mirrors = 11\nx_bs2 = 16\n"
      "x_detectors = 21\n");
  CHECK(parse_config(render_config(custom)) == custom);
  CHECK(custom.bs1.rects.size() == 2);
  CHECK(custom.bs1.rects[1].x_lo == 0.0);
  CHECK(custom.bs1.rects[1].x_hi == 30.0);
}

TEST_CASE("digest is stable and content-sensitive") {
  Scenario a = preset("scenario1");
  Scenario b = preset("scenario1");
  CHECK(digest(a) == digest(b));
  CHECK(digest(a).size() == 16);
  b.kappa2 = 1.0;
  CHECK(digest(a) != digest(b));
}

TEST_CASE("spectrum configs resolve the file relative to the config") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "pevmzi_spec_test";
  fs::create_directories(dir);
  {
    std::ofstream spec(dir / "line.dat");
    for (int i = 0; i <= 400; ++i) {
      double w = 2.0 + 0.005 * i; // band around omega = 3
      double a = std::exp(-(w - 3.0) * (w - 3.0) / 0.5);
      spec << w << " " << a << "\n";
    }
    std::ofstream cfg(dir / "with_spectrum.cfg");
    cfg << "[photon]\ntemporal = spectrum:line.dat\n";
  }
  Scenario s = load_config_file((dir / "with_spectrum.cfg").string());
  CHECK(s.photon.temporal == TemporalKind::Spectrum);
  REQUIRE(s.spectrum.has_value());
  TemporalProfile p = build_temporal_profile(s);
  CHECK(std::abs(l2_norm(p) - 1.0) < 1e-9);
  fs::remove_all(dir);
}

TEST_CASE("validation warnings") {
  CHECK(validate(preset("baseline-both")).empty());

  // A window the photon can never reach.
  Scenario dead = preset("baseline-none");
  set_param(dead, "bs2.present_t", "100:101");
  // (window outside the grid entirely; widen the grid so it is representable)
  dead.t_grid = AxisGrid::from_range(-20.0, 120.0, 0.02);
  dead.x_grid = AxisGrid::from_range(-20.0, 120.0, 0.02);
  dead.detector.tbar_min = 10.0;
  dead.detector.tbar_max = 30.0;
  auto warnings = validate(dead);
  bool found = false;
  for (const auto& w : warnings) found = found || w.find("BS2") != std::string::npos;
  CHECK(found);

  // The backward-tail photon ends at its nominal arrival; a later BS2 window
  // is dead.
  Scenario bwd = preset("scenario2-backward");
  auto bw = validate(bwd);
  bool dead_bs2 = false;
  for (const auto& w : bw)
    dead_bs2 = dead_bs2 || (w.find("BS2") != std::string::npos &&
                            w.find("dead") != std::string::npos);
  CHECK(dead_bs2);

  // Every preset validates without errors (warnings allowed).
  for (const auto& name : preset_names()) {
    CHECK_NOTHROW(validate(preset(name)));
  }
}

TEST_CASE("sweep parameter overrides") {
  Scenario s = preset("baseline-both");
  set_param(s, "kappa2", "0.5");
  CHECK(s.kappa2 == 0.5);
  set_param(s, "omega_t", "2");
  CHECK(s.photon.omega_t == 2.0);
  set_param(s, "bs1.present_t", "1:2, 3:4");
  CHECK(s.bs1.rects.size() == 2);
  CHECK_THROWS_AS(set_param(s, "delta_t", "1"), ConfigError);
}

TEST_CASE("support leaving the grid is a hard error") {
  Scenario s = preset("scenario1");
  s.t_grid = AxisGrid::from_range(0.0, 40.0, 0.02); // cuts the emission-time tail
  CHECK_THROWS_AS(check_invariants(s), PhysicsError);
}
