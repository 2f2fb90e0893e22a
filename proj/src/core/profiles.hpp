#pragma once

#include <complex>
#include <string>
#include <vector>

#include "core/grid.hpp"

namespace pevmzi {

/// One-axis complex amplitude profile with unit trapezoid L2 norm.
///
/// Constructors renormalize the sampled shape on the grid, so grid-window
/// integrals of |samples|^2 sum to exactly one. `renorm_scale` is the factor
/// that was applied to the raw shape; dividing it back out recovers the
/// analytic amplitudes.
struct AmplitudeProfile {
  AxisGrid grid;
  std::vector<std::complex<double>> samples;
  double center = 0.0;
  double width_param = 0.0;
  double renorm_scale = 1.0;
  /// Mass the grid failed to capture, where measurable (sinc).
  double truncation_deficit = 0.0;
  /// Set when the samples do not vanish (<= 1e-12) at a grid boundary.
  bool truncation_warning = false;

  double magnitude_sq(int i) const { return std::norm(samples[i]); }
};

using TemporalProfile = AmplitudeProfile;
using SpatialProfile = AmplitudeProfile;

/// Frequency profile a(omega_t) used to synthesize temporal profiles.
struct Spectrum {
  AxisGrid omega_grid;
  std::vector<std::complex<double>> samples;

  bool operator==(const Spectrum&) const = default;
};

enum class TailDirection { Forward, Backward };

/// Sharp box of width delta, support [center - delta/2, center + delta/2),
/// half-open with node-value membership.
TemporalProfile make_box_temporal(const AxisGrid& grid, double center,
                                  double delta_t);
SpatialProfile make_box_spatial(const AxisGrid& grid, double center,
                                double delta_x);

/// Gaussian shape e^{-(t-center)^2 / (2 omega_t^2)}; the resulting density
/// has standard deviation omega_t / sqrt(2).
TemporalProfile make_gaussian_temporal(const AxisGrid& grid, double center,
                                       double omega_t);

/// One-sided profile s * e^{-omega_t s}, s = +-(t - center) >= 0.
/// Forward: support entirely at t >= center; Backward: t <= center.
TemporalProfile make_exp_tail_temporal(const AxisGrid& grid, double center,
                                       double omega_t, TailDirection direction);

/// sqrt(omega_x/pi) * sin(omega_x (x-center)) / (omega_x (x-center)).
/// Fails if the grid misses more than tail_tol of the analytic mass; the
/// measured deficit is recorded on the profile.
SpatialProfile make_sinc_spatial(const AxisGrid& grid, double center,
                                 double omega_x, double tail_tol = 1e-2);

/// gamma(t) = (2 pi)^{-1/2} Integral a(w) e^{i w (t - shift)} dw by trapezoid
/// quadrature over the spectrum grid.
TemporalProfile synthesize_from_spectrum(const AxisGrid& grid,
                                         const Spectrum& spectrum,
                                         double shift);

double l2_norm(const AmplitudeProfile& profile);

/// Plain-text spectrum: rows "omega re [im]", '#' comments, omega strictly
/// increasing.
Spectrum parse_spectrum(const std::string& text);
Spectrum load_spectrum_file(const std::string& path);

} // namespace pevmzi
