#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "core/scenarios.hpp"

namespace pevmzi::oracle {

/// Brute-force result with a Richardson h-vs-h/2 error estimate.
struct OracleResult {
  double value = 0.0;
  double estimated_error = 0.0;
  double h_used = 0.0;
};

/// Integral of the analytic temporal density over [lo, hi], fine-grid
/// trapezoid at h = 1e-4. Independent of the profiles module: the analytic
/// density formulas are written out here.
OracleResult overlap_fraction(TemporalKind kind, double width, double center,
                              double lo, double hi);

/// Location of the density maximum by direct scan.
OracleResult peak_location(TemporalKind kind, double width, double center);

/// Row-major 2x2 channel matrix of the composed optical chain: BS2 (when on)
/// after the mirrors after BS1 (when on). Unitary by construction.
std::array<std::complex<double>, 4> channel_pipeline_matrix(bool bs1_on,
                                                            bool bs2_on,
                                                            double kappa1,
                                                            double kappa2);

/// Naive per-node re-evaluation of the detection-step densities on a small
/// grid (<= 201 nodes per axis): analytic profiles, own normalization, own
/// membership loops, per-node channel matrix. No factorization shortcuts.
struct DenseDensity {
  AxisGrid t_grid;
  AxisGrid x_grid;
  std::vector<double> d1; // row-major in t
  std::vector<double> d2;

  double total_mass() const;
};

DenseDensity dense_reference_density(const Scenario& scenario);

/// One frozen derived value.
struct FixtureRow {
  std::string name;
  double value = 0.0;
  double estimated_error = 0.0;
  std::string op;
  std::string params;
};

/// The derived values the test suites pin, freshly computed.
std::vector<FixtureRow> fixture_rows();

/// Writes fixture_rows() as CSV (name,value,estimated_error,oracle_op,params).
void write_fixture_file(const std::string& path);

std::vector<FixtureRow> parse_fixture_file(const std::string& path);

} // namespace pevmzi::oracle
