#include "doctest.h"

#include <cmath>
#include <complex>
#include <cstdio>
#include <random>

#include "core/closed_form.hpp"
#include "core/engine.hpp"
#include "core/errors.hpp"
#include "core/oracle.hpp"

using namespace pevmzi;
using oracle::OracleResult;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("overlap oracle against closed-form integrals") {
  // Box fully covered by the window.
  OracleResult box = oracle::overlap_fraction(TemporalKind::Box, 2.0, 5.0, 4.0, 6.0);
  CHECK(std::abs(box.value - 1.0) < 1e-9);

  // Gaussian one-sigma-band mass is erf(1).
  OracleResult band =
      oracle::overlap_fraction(TemporalKind::Gaussian, 1.0, 15.0, 14.0, 16.0);
  CHECK(std::abs(band.value - std::erf(1.0)) < band.estimated_error + 1e-12);

  // Forward tail: the antiderivative of 4 s^2 e^{-2s} is known.
  auto mass = [](double lo, double hi) {
    auto F = [](double s) { return -std::exp(-2.0 * s) * (0.5 * s * s + 0.5 * s + 0.25); };
    return 4.0 * (F(hi) - F(lo));
  };
  OracleResult fwd =
      oracle::overlap_fraction(TemporalKind::ExpForward, 1.0, 15.0, 16.5, 19.5);
  CHECK(std::abs(fwd.value - mass(1.5, 4.5)) < fwd.estimated_error + 1e-10);

  // Backward tail never reaches past its center.
  OracleResult bwd =
      oracle::overlap_fraction(TemporalKind::ExpBackward, 1.0, 15.0, 16.5, 19.5);
  CHECK(bwd.value == 0.0);
}

TEST_CASE("oracle quadrature converges as advertised") {
  for (auto kind : {TemporalKind::Gaussian, TemporalKind::ExpForward}) {
    OracleResult r = oracle::overlap_fraction(kind, 1.0, 0.0, 0.5, 3.0);
    CHECK(r.estimated_error >= 0.0);
    CHECK(r.estimated_error < 1e-8);
    CHECK(r.h_used == doctest::Approx(5e-5));
  }
}

TEST_CASE("channel matrix oracle") {
  // Both splitters with matched pi phases: channel 1 in, channel 1 out.
  auto m = oracle::channel_pipeline_matrix(true, true, kPi, kPi);
  CHECK(std::abs(m[0] - std::complex<double>{-1.0, 0.0}) < 1e-12);
  CHECK(std::abs(m[2]) < 1e-12);

  // Nothing in the beam path: channel 1 only picks up the mirror phase.
  auto off = oracle::channel_pipeline_matrix(false, false, 0.8, 2.0);
  CHECK(std::abs(off[0] - std::polar(1.0, 0.8)) < 1e-14);
  CHECK(std::abs(off[1]) == 0.0);
  CHECK(std::abs(off[2]) == 0.0);

  // Unitarity for random phases.
  std::mt19937 rng(43);
  std::uniform_real_distribution<double> dist(-2.0 * kPi, 2.0 * kPi);
  for (int i = 0; i < 100; ++i) {
    for (bool b1 : {false, true}) {
      for (bool b2 : {false, true}) {
        auto u = oracle::channel_pipeline_matrix(b1, b2, dist(rng), dist(rng));
        std::complex<double> g00 = std::conj(u[0]) * u[0] + std::conj(u[2]) * u[2];
        std::complex<double> g01 = std::conj(u[0]) * u[1] + std::conj(u[2]) * u[3];
        std::complex<double> g11 = std::conj(u[1]) * u[1] + std::conj(u[3]) * u[3];
        CHECK(std::abs(g00 - 1.0) < 1e-14);
        CHECK(std::abs(g01) < 1e-14);
        CHECK(std::abs(g11 - 1.0) < 1e-14);
      }
    }
  }
}

TEST_CASE("dense reference density certifies both implementations") {
  for (const char* name : {"baseline-both", "scenario1", "scenario3",
                           "scenario2-forward"}) {
    Scenario s = preset(name);
    s.t_grid = AxisGrid::from_range(-20.0, 40.0, 0.5);
    s.x_grid = AxisGrid::from_range(-20.0, 40.0, 0.5);

    oracle::DenseDensity ref = oracle::dense_reference_density(s);
    ClosedForm cf(s);
    auto [state, log] = run_pipeline(s);

    double worst_cf = 0.0, worst_engine = 0.0;
    for (int it = 0; it < s.t_grid.count; ++it) {
      for (int ix = 0; ix < s.x_grid.count; ++ix) {
        size_t idx = static_cast<size_t>(it) * s.x_grid.count + ix;
        worst_cf = std::max(worst_cf,
                            std::abs(ref.d1[idx] - cf.density_at_node(Detector::D1, it, ix)));
        worst_cf = std::max(worst_cf,
                            std::abs(ref.d2[idx] - cf.density_at_node(Detector::D2, it, ix)));
        worst_engine =
            std::max(worst_engine, std::abs(ref.d1[idx] - std::norm(state.a1(it, ix))));
        worst_engine =
            std::max(worst_engine, std::abs(ref.d2[idx] - std::norm(state.a2(it, ix))));
      }
    }
    CHECK(worst_cf <= 1e-12);
    CHECK(worst_engine <= 1e-8);
    CHECK(ref.total_mass() == doctest::Approx(1.0).epsilon(1e-3));
  }

  Scenario big = preset("baseline-none");
  CHECK_THROWS_AS(oracle::dense_reference_density(big), InvalidArgument);
}

TEST_CASE("fixture file matches a fresh oracle run") {
  auto fresh = oracle::fixture_rows();
  auto stored = oracle::parse_fixture_file(PEVMZI_FIXTURE_FILE);
  REQUIRE(stored.size() == fresh.size());
  for (size_t i = 0; i < fresh.size(); ++i) {
    CHECK(stored[i].name == fresh[i].name);
    CHECK(stored[i].op == fresh[i].op);
    double tol = stored[i].estimated_error + fresh[i].estimated_error + 1e-12;
    CHECK(std::abs(stored[i].value - fresh[i].value) <= tol);
  }
}

TEST_CASE("fixture regeneration writes a parseable file") {
  std::string path = "fixture_regen_test.csv";
  oracle::write_fixture_file(path);
  auto rows = oracle::parse_fixture_file(path);
  CHECK(rows.size() == oracle::fixture_rows().size());
  CHECK(rows[0].name == "gauss_mass_18_21_center15");
  std::remove(path.c_str());
}
