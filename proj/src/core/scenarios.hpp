#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/grid.hpp"
#include "core/profiles.hpp"
#include "core/regions.hpp"

namespace pevmzi {

enum class TemporalKind { Box, Gaussian, ExpForward, ExpBackward, Spectrum };
enum class SpatialKind { Box, Sinc };

struct PhotonSpec {
  TemporalKind temporal = TemporalKind::Gaussian;
  SpatialKind spatial = SpatialKind::Box;
  double omega_t = 1.0;
  double delta_t = 2.0;
  double omega_x = 2.0;
  double delta_x = 2.0;
  /// Emission center: the wavepacket is centered here at the source step.
  double t0 = 0.0;
  double x0 = 0.0;
  double tail_tol = 1e-2;
  std::string spectrum_path; // set when temporal == Spectrum

  bool operator==(const PhotonSpec&) const = default;
};

/// Element positions along the beam line. The cumulative worldline shift of
/// step k is the distance from the source to that element.
struct Geometry {
  double x_source = 0.0;
  double x_bs1 = 5.0;
  double x_mirrors = 10.0;
  double x_bs2 = 15.0;
  double x_detectors = 20.0;

  double alpha_bs1() const { return x_bs1 - x_source; }
  double alpha_mirrors() const { return x_mirrors - x_source; }
  double alpha_bs2() const { return x_bs2 - x_source; }
  double alpha_detectors() const { return x_detectors - x_source; }

  bool operator==(const Geometry&) const = default;
};

struct DetectorSpec {
  double eps_t = 0.1;
  double eps_x = 0.0;     // ignored when eps_x_full
  bool eps_x_full = true; // "full" sentinel: integrate the whole x axis
  double tbar_min = 10.0;
  double tbar_max = 30.0;
  double tbar_step = 0.1;

  int tbar_count() const;
  double tbar(int i) const { return tbar_min + i * tbar_step; }

  bool operator==(const DetectorSpec&) const = default;
};

struct Scenario {
  Geometry geometry;
  PhotonSpec photon;
  SpacetimeRegion bs1 = SpacetimeRegion::never("BS1");
  SpacetimeRegion bs2 = SpacetimeRegion::never("BS2");
  double kappa1 = 3.14159265358979323846;
  double kappa2 = 3.14159265358979323846;
  DetectorSpec detector;
  AxisGrid t_grid = AxisGrid::from_range(-20.0, 40.0, 0.02);
  AxisGrid x_grid = AxisGrid::from_range(-20.0, 40.0, 0.02);
  /// Spectrum loaded at parse time when photon.temporal == Spectrum.
  std::optional<Spectrum> spectrum;

  bool operator==(const Scenario&) const = default;
};

/// Named experiment setups. Baselines cover the always/never beamsplitter
/// combinations; the numbered scenarios insert the beamsplitters in finite
/// time windows around or away from the photon's nominal passage.
Scenario preset(const std::string& name);
const std::vector<std::string>& preset_names();

/// Sectioned key=value config text -> validated scenario.
Scenario parse_config(const std::string& text);
Scenario load_config_file(const std::string& path);

/// Canonical config text; parse_config(render_config(s)) == s field-exactly.
std::string render_config(const Scenario& s);

/// FNV-1a hash of the canonical config, as 16 hex chars.
std::string digest(const Scenario& s);

/// Re-checks all scenario invariants (geometry ordering, commensurability,
/// support coverage). Throws on violation.
void check_invariants(const Scenario& s);

/// Non-fatal diagnostics: photon mass outside the grid, presence windows the
/// photon can never overlap, detector windows clipped by the grid.
std::vector<std::string> validate(const Scenario& s);

/// Sweepable parameter override; key is one of omega_t, omega_x, kappa1,
/// kappa2, bs1.present_t, bs2.present_t.
void set_param(Scenario& s, const std::string& key, const std::string& value);

/// Profiles centered at the emission point, on the scenario grids.
TemporalProfile build_temporal_profile(const Scenario& s);
SpatialProfile build_spatial_profile(const Scenario& s);

} // namespace pevmzi
