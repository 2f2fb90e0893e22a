#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

namespace pevmzi {

/// Uniform 1D grid, points are min + i*h. Natural units (c = 1) throughout.
struct AxisGrid {
  double min = 0.0;
  double max = 0.0;
  double h = 0.0;
  int count = 0;

  static AxisGrid from_range(double min, double max, double h);

  double point(int i) const { return min + i * h; }
  double span() const { return max - min; }

  /// Trapezoid quadrature weight of node i.
  double weight(int i) const {
    return (i == 0 || i == count - 1) ? 0.5 * h : h;
  }

  /// Nearest node index, clamped to the grid.
  int index_near(double v) const;

  /// True if v coincides with a grid node to 1e-9 (absolute in index space).
  bool aligned(double v) const;

  bool contains(double v) const { return v >= min && v <= max; }

  bool operator==(const AxisGrid&) const = default;
};

/// True if `step` is an integer multiple of h (1e-9 in index space).
bool commensurate(double step, double h);

/// round(step/h); caller must have checked commensurability.
int cells_for(double step, double h);

/// Trapezoid-rule L2 norm of complex samples on the grid.
double trapezoid_norm(const AxisGrid& grid,
                      std::span<const std::complex<double>> samples);

/// Trapezoid-rule integral of real samples over the full grid.
double trapezoid_integral(const AxisGrid& grid, std::span<const double> samples);

/// Trapezoid integral of real samples over [lo, hi] (clipped to the grid).
/// Off-node interval ends contribute partial cells via linear interpolation,
/// so the result is additive over adjacent intervals.
double integrate_interval(const AxisGrid& grid, std::span<const double> samples,
                          double lo, double hi);

} // namespace pevmzi
