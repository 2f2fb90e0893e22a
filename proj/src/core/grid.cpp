#include "core/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/errors.hpp"

namespace pevmzi {

AxisGrid AxisGrid::from_range(double min, double max, double h) {
  if (!(h > 0.0)) throw ConfigError("grid spacing must be positive");
  if (!(max > min)) throw ConfigError("grid max must exceed min");
  double steps = (max - min) / h;
  double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9) {
    std::ostringstream os;
    os << "grid span " << (max - min) << " is not a whole number of cells of size " << h;
    throw ConfigError(os.str());
  }
  AxisGrid g;
  g.min = min;
  g.max = max;
  g.h = h;
  g.count = static_cast<int>(rounded) + 1;
  return g;
}

int AxisGrid::index_near(double v) const {
  int i = static_cast<int>(std::lround((v - min) / h));
  return std::clamp(i, 0, count - 1);
}

bool AxisGrid::aligned(double v) const {
  double idx = (v - min) / h;
  return std::abs(idx - std::round(idx)) <= 1e-9;
}

bool commensurate(double step, double h) {
  double idx = step / h;
  return std::abs(idx - std::round(idx)) <= 1e-9;
}

int cells_for(double step, double h) {
  return static_cast<int>(std::lround(step / h));
}

double trapezoid_norm(const AxisGrid& grid,
                      std::span<const std::complex<double>> samples) {
  double acc = 0.0;
  for (int i = 0; i < grid.count; ++i) acc += std::norm(samples[i]) * grid.weight(i);
  return std::sqrt(acc);
}

double trapezoid_integral(const AxisGrid& grid, std::span<const double> samples) {
  double acc = 0.0;
  for (int i = 0; i < grid.count; ++i) acc += samples[i] * grid.weight(i);
  return acc;
}

namespace {

double interp(const AxisGrid& g, std::span<const double> f, double v) {
  if (v <= g.min) return f[0];
  if (v >= g.max) return f[g.count - 1];
  double idx = (v - g.min) / g.h;
  int i = static_cast<int>(std::floor(idx));
  if (i >= g.count - 1) return f[g.count - 1];
  double frac = idx - i;
  return f[i] * (1.0 - frac) + f[i + 1] * frac;
}

} // namespace

double integrate_interval(const AxisGrid& grid, std::span<const double> samples,
                          double lo, double hi) {
  lo = std::max(lo, grid.min);
  hi = std::min(hi, grid.max);
  if (!(hi > lo)) return 0.0;

  // Node range strictly covered by [lo, hi].
  int i0 = static_cast<int>(std::ceil((lo - grid.min) / grid.h - 1e-12));
  int i1 = static_cast<int>(std::floor((hi - grid.min) / grid.h + 1e-12));
  i0 = std::clamp(i0, 0, grid.count - 1);
  i1 = std::clamp(i1, 0, grid.count - 1);

  if (i0 > i1) {
    // Interval lies inside a single cell.
    double fa = interp(grid, samples, lo);
    double fb = interp(grid, samples, hi);
    return 0.5 * (fa + fb) * (hi - lo);
  }

  double acc = 0.0;
  // Interior trapezoid over nodes i0..i1.
  for (int i = i0; i <= i1; ++i) acc += samples[i];
  acc -= 0.5 * (samples[i0] + samples[i1]);
  acc *= grid.h;
  // Partial end cells.
  double ta = grid.point(i0);
  if (ta > lo) acc += 0.5 * (interp(grid, samples, lo) + samples[i0]) * (ta - lo);
  double tb = grid.point(i1);
  if (hi > tb) acc += 0.5 * (samples[i1] + interp(grid, samples, hi)) * (hi - tb);
  return acc;
}

} // namespace pevmzi
