#include "core/profiles.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "core/errors.hpp"

namespace pevmzi {

namespace {

constexpr double kBoundaryVanish = 1e-12;

/// Normalize in place and record boundary behaviour.
void finalize(AmplitudeProfile& p) {
  double norm = trapezoid_norm(p.grid, p.samples);
  if (!(norm > 1e-300)) throw PhysicsError("profile has zero mass on the grid");
  double scale = 1.0 / norm;
  for (auto& s : p.samples) s *= scale;
  p.renorm_scale = scale;
  if (std::abs(p.samples.front()) > kBoundaryVanish ||
      std::abs(p.samples.back()) > kBoundaryVanish) {
    p.truncation_warning = true;
  }
}

AmplitudeProfile make_box(const AxisGrid& grid, double center, double delta) {
  if (!(delta > 0.0)) throw ConfigError("box width must be positive");
  if (delta < 2.0 * grid.h) {
    std::ostringstream os;
    os << "box width " << delta << " is narrower than two grid cells (h=" << grid.h << ")";
    throw ConfigError(os.str());
  }
  double lo = center - 0.5 * delta;
  double hi = center + 0.5 * delta;
  if (lo < grid.min || hi > grid.max) {
    std::ostringstream os;
    os << "box support [" << lo << ", " << hi << "] exceeds grid ["
       << grid.min << ", " << grid.max << "]";
    throw ConfigError(os.str());
  }
  AmplitudeProfile p;
  p.grid = grid;
  p.center = center;
  p.width_param = delta;
  p.samples.assign(grid.count, {0.0, 0.0});
  double amp = 1.0 / std::sqrt(delta);
  for (int i = 0; i < grid.count; ++i) {
    double t = grid.point(i);
    if (t >= lo && t < hi) p.samples[i] = amp;
  }
  finalize(p);
  return p;
}

} // namespace

TemporalProfile make_box_temporal(const AxisGrid& grid, double center,
                                  double delta_t) {
  return make_box(grid, center, delta_t);
}

SpatialProfile make_box_spatial(const AxisGrid& grid, double center,
                                double delta_x) {
  return make_box(grid, center, delta_x);
}

TemporalProfile make_gaussian_temporal(const AxisGrid& grid, double center,
                                       double omega_t) {
  if (!(omega_t > 0.0)) throw ConfigError("gaussian width must be positive");
  if (!grid.contains(center)) throw ConfigError("gaussian center outside grid");
  if (center - grid.min < 8.0 * omega_t || grid.max - center < 8.0 * omega_t) {
    std::ostringstream os;
    os << "grid does not extend 8*omega_t = " << 8.0 * omega_t
       << " beyond the gaussian center " << center;
    throw PhysicsError(os.str());
  }
  AmplitudeProfile p;
  p.grid = grid;
  p.center = center;
  p.width_param = omega_t;
  p.samples.resize(grid.count);
  double inv = 1.0 / (2.0 * omega_t * omega_t);
  for (int i = 0; i < grid.count; ++i) {
    double d = grid.point(i) - center;
    p.samples[i] = std::exp(-d * d * inv);
  }
  finalize(p);
  return p;
}

TemporalProfile make_exp_tail_temporal(const AxisGrid& grid, double center,
                                       double omega_t,
                                       TailDirection direction) {
  if (!(omega_t > 0.0)) throw ConfigError("tail width must be positive");
  if (!grid.contains(center)) throw ConfigError("tail center outside grid");
  double reach = 20.0 / omega_t;
  if (direction == TailDirection::Forward) {
    if (grid.max - center < reach)
      throw PhysicsError("grid does not extend 20/omega_t past the center in the forward tail direction");
  } else {
    if (center - grid.min < reach)
      throw PhysicsError("grid does not extend 20/omega_t past the center in the backward tail direction");
  }
  AmplitudeProfile p;
  p.grid = grid;
  p.center = center;
  p.width_param = omega_t;
  p.samples.assign(grid.count, {0.0, 0.0});
  double sign = direction == TailDirection::Forward ? 1.0 : -1.0;
  for (int i = 0; i < grid.count; ++i) {
    double s = sign * (grid.point(i) - center);
    if (s >= 0.0) p.samples[i] = s * std::exp(-omega_t * s);
  }
  finalize(p);
  return p;
}

SpatialProfile make_sinc_spatial(const AxisGrid& grid, double center,
                                 double omega_x, double tail_tol) {
  if (!(omega_x > 0.0)) throw ConfigError("sinc width must be positive");
  if (!grid.contains(center)) throw ConfigError("sinc center outside grid");
  AmplitudeProfile p;
  p.grid = grid;
  p.center = center;
  p.width_param = omega_x;
  p.samples.resize(grid.count);
  double amp = std::sqrt(omega_x / std::numbers::pi);
  for (int i = 0; i < grid.count; ++i) {
    double u = omega_x * (grid.point(i) - center);
    p.samples[i] = u == 0.0 ? amp : amp * std::sin(u) / u;
  }
  // The analytic profile has unit mass, so the captured grid mass measures
  // the truncated 1/x^2 tails directly.
  double captured = trapezoid_norm(grid, p.samples);
  double deficit = 1.0 - captured * captured;
  if (deficit > tail_tol) {
    std::ostringstream os;
    os << "sinc tail mass outside the grid is " << deficit
       << ", above the tolerance " << tail_tol;
    throw PhysicsError(os.str());
  }
  p.truncation_deficit = std::max(deficit, 0.0);
  finalize(p);
  return p;
}

TemporalProfile synthesize_from_spectrum(const AxisGrid& grid,
                                         const Spectrum& spectrum,
                                         double shift) {
  const auto& og = spectrum.omega_grid;
  if (og.count != static_cast<int>(spectrum.samples.size()))
    throw InvalidArgument("spectrum sample count does not match its grid");

  double peak = 0.0;
  for (const auto& a : spectrum.samples) peak = std::max(peak, std::abs(a));
  if (!(peak > 0.0)) throw PhysicsError("spectrum has zero mass");
  double omega_max = 0.0;
  for (int i = 0; i < og.count; ++i) {
    if (std::abs(spectrum.samples[i]) > 1e-12 * peak)
      omega_max = std::max(omega_max, std::abs(og.point(i)));
  }
  if (omega_max > 0.0 && grid.h > std::numbers::pi / omega_max) {
    std::ostringstream os;
    os << "grid spacing " << grid.h << " cannot resolve spectral content up to |omega| = "
       << omega_max << " (needs h <= " << std::numbers::pi / omega_max << ")";
    throw ConfigError(os.str());
  }

  AmplitudeProfile p;
  p.grid = grid;
  p.center = shift;
  p.samples.resize(grid.count);
  const double pref = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  for (int i = 0; i < grid.count; ++i) {
    double t = grid.point(i) - shift;
    std::complex<double> acc{0.0, 0.0};
    for (int k = 0; k < og.count; ++k) {
      double w = og.point(k);
      acc += spectrum.samples[k] * std::polar(og.weight(k), w * t);
    }
    p.samples[i] = pref * acc;
  }
  finalize(p);

  // RMS temporal width of the synthesized density, for reporting.
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < grid.count; ++i) {
    double d = std::norm(p.samples[i]) * grid.weight(i);
    double t = grid.point(i);
    m0 += d;
    m1 += d * t;
    m2 += d * t * t;
  }
  double mean = m1 / m0;
  p.width_param = std::sqrt(std::max(m2 / m0 - mean * mean, 0.0));
  return p;
}

double l2_norm(const AmplitudeProfile& profile) {
  return trapezoid_norm(profile.grid, profile.samples);
}

Spectrum parse_spectrum(const std::string& text) {
  std::istringstream in(text);
  std::vector<double> omegas;
  std::vector<std::complex<double>> vals;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double w, re, im;
    if (!(ls >> w)) continue; // blank line
    if (!(ls >> re)) {
      throw ConfigError("spectrum line " + std::to_string(lineno) +
                        ": expected at least two columns");
    }
    if (!(ls >> im)) im = 0.0;
    std::string rest;
    if (ls >> rest) {
      throw ConfigError("spectrum line " + std::to_string(lineno) +
                        ": too many columns");
    }
    if (!std::isfinite(w) || !std::isfinite(re) || !std::isfinite(im)) {
      throw ConfigError("spectrum line " + std::to_string(lineno) +
                        ": values must be finite");
    }
    if (!omegas.empty() && w <= omegas.back()) {
      throw ConfigError("spectrum line " + std::to_string(lineno) +
                        ": omega values must be strictly increasing");
    }
    omegas.push_back(w);
    vals.emplace_back(re, im);
  }
  if (omegas.size() < 2) throw ConfigError("spectrum needs at least two rows");

  // Require a uniform omega grid so trapezoid weights are well defined.
  double h = omegas[1] - omegas[0];
  for (size_t i = 1; i < omegas.size(); ++i) {
    double step = omegas[i] - omegas[i - 1];
    if (std::abs(step - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw ConfigError("spectrum omega grid must be uniform");
  }
  Spectrum s;
  s.omega_grid = AxisGrid::from_range(omegas.front(), omegas.back(), h);
  s.samples = std::move(vals);
  double norm = trapezoid_norm(s.omega_grid, s.samples);
  if (!(norm > 0.0)) throw PhysicsError("spectrum has zero L2 norm");
  return s;
}

Spectrum load_spectrum_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open spectrum file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spectrum(buf.str());
}

} // namespace pevmzi
