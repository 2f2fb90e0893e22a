#include "core/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "core/errors.hpp"

namespace pevmzi {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& raw, int line) {
  std::string v = trim(raw);
  const char* c = v.c_str();
  char* end = nullptr;
  double d = std::strtod(c, &end);
  if (end == c || *end != '\0' || !std::isfinite(d)) {
    throw ConfigError("line " + std::to_string(line) + ": not a number: '" + v + "'");
  }
  return d;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::pair<double, double> parse_pair(const std::string& raw, int line) {
  auto parts = split(trim(raw), ':');
  if (parts.size() != 2)
    throw ConfigError("line " + std::to_string(line) + ": expected lo:hi, got '" + raw + "'");
  double lo = parse_double(parts[0], line);
  double hi = parse_double(parts[1], line);
  if (!(lo < hi))
    throw ConfigError("line " + std::to_string(line) + ": interval lo must be below hi in '" +
                      trim(raw) + "'");
  return {lo, hi};
}

struct Triple {
  double a, b, c;
};

Triple parse_triple(const std::string& raw, int line) {
  auto parts = split(trim(raw), ':');
  if (parts.size() != 3)
    throw ConfigError("line " + std::to_string(line) + ": expected min:max:step, got '" + raw + "'");
  return {parse_double(parts[0], line), parse_double(parts[1], line),
          parse_double(parts[2], line)};
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct RawEntry {
  std::string value;
  int line = 0;
};

using Section = std::map<std::string, RawEntry>;

struct RawConfig {
  std::map<std::string, Section> sections;

  const RawEntry* find(const std::string& sec, const std::string& key) const {
    auto s = sections.find(sec);
    if (s == sections.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    return &k->second;
  }
};

const std::map<std::string, std::vector<std::string>> kKnownKeys = {
    {"photon",
     {"temporal", "spatial", "omega_t", "delta_t", "omega_x", "delta_x", "t0",
      "x0", "tail_tol"}},
    {"geometry", {"x_source", "x_bs1", "x_mirrors", "x_bs2", "x_detectors"}},
    {"bs1", {"present_t", "extent_x"}},
    {"bs2", {"present_t", "extent_x"}},
    {"mirrors", {"kappa1", "kappa2"}},
    {"detector", {"eps_t", "eps_x", "tbar"}},
    {"grid", {"t", "x"}},
};

RawConfig tokenize(const std::string& text) {
  RawConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      section = trim(t.substr(1, t.size() - 2));
      if (!kKnownKeys.contains(section))
        throw ConfigError("line " + std::to_string(lineno) + ": unknown section [" + section + "]");
      cfg.sections.try_emplace(section);
      continue;
    }
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    if (section.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    const auto& known = kKnownKeys.at(section);
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key +
                        "' in section [" + section + "]");
    auto [it, inserted] = cfg.sections[section].try_emplace(key, RawEntry{value, lineno});
    if (!inserted)
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }
  return cfg;
}

SpacetimeRegion build_region(const std::string& label, const RawEntry* present,
                             const RawEntry* extent) {
  SpacetimeRegion region = SpacetimeRegion::never(label);
  double x_lo = kNegInf, x_hi = kPosInf;
  if (extent != nullptr) {
    auto [lo, hi] = parse_pair(extent->value, extent->line);
    x_lo = lo;
    x_hi = hi;
  }
  if (present == nullptr) return region; // default: never present
  std::string v = trim(present->value);
  if (v == "never") return region;
  if (v == "always") {
    region.rects.push_back(Rect{kNegInf, kPosInf, x_lo, x_hi});
    return region;
  }
  for (const auto& piece : split(v, ',')) {
    auto [lo, hi] = parse_pair(piece, present->line);
    region.rects.push_back(Rect{lo, hi, x_lo, x_hi});
  }
  return region;
}

Scenario from_raw(const RawConfig& raw, const std::string& base_dir) {
  Scenario s;

  if (const auto* e = raw.find("grid", "t")) {
    Triple t = parse_triple(e->value, e->line);
    s.t_grid = AxisGrid::from_range(t.a, t.b, t.c);
  }
  if (const auto* e = raw.find("grid", "x")) {
    Triple t = parse_triple(e->value, e->line);
    s.x_grid = AxisGrid::from_range(t.a, t.b, t.c);
  }

  if (const auto* e = raw.find("geometry", "x_source")) s.geometry.x_source = parse_double(e->value, e->line);
  if (const auto* e = raw.find("geometry", "x_bs1")) s.geometry.x_bs1 = parse_double(e->value, e->line);
  if (const auto* e = raw.find("geometry", "x_mirrors")) s.geometry.x_mirrors = parse_double(e->value, e->line);
  if (const auto* e = raw.find("geometry", "x_bs2")) s.geometry.x_bs2 = parse_double(e->value, e->line);
  if (const auto* e = raw.find("geometry", "x_detectors")) s.geometry.x_detectors = parse_double(e->value, e->line);

  if (const auto* e = raw.find("photon", "temporal")) {
    std::string v = trim(e->value);
    if (v == "box") s.photon.temporal = TemporalKind::Box;
    else if (v == "gaussian") s.photon.temporal = TemporalKind::Gaussian;
    else if (v == "exp_forward") s.photon.temporal = TemporalKind::ExpForward;
    else if (v == "exp_backward") s.photon.temporal = TemporalKind::ExpBackward;
    else if (v.rfind("spectrum:", 0) == 0) {
      s.photon.temporal = TemporalKind::Spectrum;
      s.photon.spectrum_path = trim(v.substr(9));
      if (s.photon.spectrum_path.empty())
        throw ConfigError("line " + std::to_string(e->line) + ": spectrum path missing");
    } else {
      throw ConfigError("line " + std::to_string(e->line) + ": unknown temporal kind '" + v + "'");
    }
  }
  if (const auto* e = raw.find("photon", "spatial")) {
    std::string v = trim(e->value);
    if (v == "sinc") s.photon.spatial = SpatialKind::Sinc;
    else if (v == "box") s.photon.spatial = SpatialKind::Box;
    else throw ConfigError("line " + std::to_string(e->line) + ": unknown spatial kind '" + v + "'");
  }
  if (const auto* e = raw.find("photon", "omega_t")) s.photon.omega_t = parse_double(e->value, e->line);
  if (const auto* e = raw.find("photon", "delta_t")) s.photon.delta_t = parse_double(e->value, e->line);
  if (const auto* e = raw.find("photon", "omega_x")) s.photon.omega_x = parse_double(e->value, e->line);
  if (const auto* e = raw.find("photon", "delta_x")) s.photon.delta_x = parse_double(e->value, e->line);
  if (const auto* e = raw.find("photon", "t0")) s.photon.t0 = parse_double(e->value, e->line);
  if (const auto* e = raw.find("photon", "x0")) s.photon.x0 = parse_double(e->value, e->line);
  if (const auto* e = raw.find("photon", "tail_tol")) s.photon.tail_tol = parse_double(e->value, e->line);

  s.bs1 = build_region("BS1", raw.find("bs1", "present_t"), raw.find("bs1", "extent_x"));
  s.bs2 = build_region("BS2", raw.find("bs2", "present_t"), raw.find("bs2", "extent_x"));

  if (const auto* e = raw.find("mirrors", "kappa1")) s.kappa1 = parse_double(e->value, e->line);
  if (const auto* e = raw.find("mirrors", "kappa2")) s.kappa2 = parse_double(e->value, e->line);

  if (const auto* e = raw.find("detector", "eps_t")) s.detector.eps_t = parse_double(e->value, e->line);
  if (const auto* e = raw.find("detector", "eps_x")) {
    std::string v = trim(e->value);
    if (v == "full") {
      s.detector.eps_x_full = true;
      s.detector.eps_x = 0.0;
    } else {
      s.detector.eps_x_full = false;
      s.detector.eps_x = parse_double(v, e->line);
    }
  }
  if (const auto* e = raw.find("detector", "tbar")) {
    Triple t = parse_triple(e->value, e->line);
    s.detector.tbar_min = t.a;
    s.detector.tbar_max = t.b;
    s.detector.tbar_step = t.c;
  }

  if (s.photon.temporal == TemporalKind::Spectrum) {
    std::filesystem::path p(s.photon.spectrum_path);
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    s.spectrum = load_spectrum_file(p.string());
  }

  check_invariants(s);
  return s;
}

struct SupportSpan {
  double lo;
  double hi;
  bool known = true;
};

SupportSpan temporal_span(const PhotonSpec& p, double center) {
  switch (p.temporal) {
    case TemporalKind::Box:
      return {center - 0.5 * p.delta_t, center + 0.5 * p.delta_t};
    case TemporalKind::Gaussian:
      return {center - 8.0 * p.omega_t, center + 8.0 * p.omega_t};
    case TemporalKind::ExpForward:
      return {center, center + 20.0 / p.omega_t};
    case TemporalKind::ExpBackward:
      return {center - 20.0 / p.omega_t, center};
    case TemporalKind::Spectrum:
      return {center, center, false};
  }
  return {center, center, false};
}

void merge_intervals(std::vector<std::pair<double, double>>& iv) {
  std::sort(iv.begin(), iv.end());
  std::vector<std::pair<double, double>> out;
  for (auto& p : iv) {
    if (!out.empty() && p.first <= out.back().second) {
      out.back().second = std::max(out.back().second, p.second);
    } else {
      out.push_back(p);
    }
  }
  iv = std::move(out);
}

/// Density mass of a temporal profile over the region's t-windows, with the
/// profile centered at the element's position.
double window_overlap_mass(const Scenario& s, const SpacetimeRegion& region,
                           double center_t) {
  Scenario probe = s;
  probe.photon.t0 = center_t;
  TemporalProfile prof = build_temporal_profile(probe);
  std::vector<double> dens(prof.grid.count);
  for (int i = 0; i < prof.grid.count; ++i) dens[i] = prof.magnitude_sq(i);
  std::vector<std::pair<double, double>> windows;
  for (const auto& r : region.rects) {
    double lo = std::max(r.t_lo, prof.grid.min);
    double hi = std::min(r.t_hi, prof.grid.max);
    if (hi > lo) windows.emplace_back(lo, hi);
  }
  merge_intervals(windows);
  double mass = 0.0;
  for (auto& [lo, hi] : windows) mass += integrate_interval(prof.grid, dens, lo, hi);
  return mass;
}

} // namespace

int DetectorSpec::tbar_count() const {
  double steps = (tbar_max - tbar_min) / tbar_step;
  return static_cast<int>(std::lround(steps)) + 1;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "baseline-none",     "baseline-bs1-only", "baseline-bs2-only",
      "baseline-both",     "scenario1",         "scenario2-forward",
      "scenario2-backward", "scenario2-gaussian", "scenario3"};
  return names;
}

Scenario preset(const std::string& name) {
  Scenario s; // defaults are the baseline-none setup
  auto window = [](const std::string& label, double lo, double hi) {
    SpacetimeRegion r = SpacetimeRegion::never(label);
    r.rects.push_back(Rect{lo, hi, kNegInf, kPosInf});
    return r;
  };

  if (name == "baseline-none") {
    // all defaults
  } else if (name == "baseline-bs1-only") {
    s.bs1 = SpacetimeRegion::always("BS1");
  } else if (name == "baseline-bs2-only") {
    s.bs2 = SpacetimeRegion::always("BS2");
  } else if (name == "baseline-both") {
    s.bs1 = SpacetimeRegion::always("BS1");
    s.bs2 = SpacetimeRegion::always("BS2");
  } else if (name == "scenario1") {
    s.bs2 = window("BS2", 18.0, 21.0);
  } else if (name == "scenario2-forward") {
    s.photon.temporal = TemporalKind::ExpForward;
    s.bs1 = window("BS1", 1.5, 4.5);
    s.bs2 = window("BS2", 16.5, 19.5);
  } else if (name == "scenario2-backward") {
    // The backward tail ends at the nominal arrival time, so BS2's late
    // window never overlaps it; BS1 stays out of the setup in this variant.
    s.photon.temporal = TemporalKind::ExpBackward;
    s.bs2 = window("BS2", 16.5, 19.5);
  } else if (name == "scenario2-gaussian") {
    s.bs1 = window("BS1", 1.5, 4.5);
    s.bs2 = window("BS2", 16.5, 19.5);
  } else if (name == "scenario3") {
    s.bs1 = window("BS1", 6.5, 7.5);
    s.bs2 = window("BS2", 6.5, 9.5);
  } else {
    throw ConfigError("unknown preset: " + name);
  }
  check_invariants(s);
  return s;
}

Scenario parse_config(const std::string& text) {
  return from_raw(tokenize(text), "");
}

Scenario load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string dir = std::filesystem::path(path).parent_path().string();
  return from_raw(tokenize(buf.str()), dir);
}

namespace {

std::string render_region(const SpacetimeRegion& r) {
  if (r.empty()) return "never";
  if (r.is_all_spacetime() ||
      (r.rects.size() == 1 && r.rects[0].t_lo == kNegInf && r.rects[0].t_hi == kPosInf))
    return "always";
  std::string out;
  for (size_t i = 0; i < r.rects.size(); ++i) {
    if (i > 0) out += ", ";
    out += fmt(r.rects[i].t_lo) + ":" + fmt(r.rects[i].t_hi);
  }
  return out;
}

void render_extent(std::ostream& os, const SpacetimeRegion& r) {
  if (!r.empty() && r.rects[0].x_lo != kNegInf && r.rects[0].x_hi != kPosInf) {
    os << "extent_x = " << fmt(r.rects[0].x_lo) << ":" << fmt(r.rects[0].x_hi) << "\n";
  }
}

std::string temporal_name(const PhotonSpec& p) {
  switch (p.temporal) {
    case TemporalKind::Box: return "box";
    case TemporalKind::Gaussian: return "gaussian";
    case TemporalKind::ExpForward: return "exp_forward";
    case TemporalKind::ExpBackward: return "exp_backward";
    case TemporalKind::Spectrum: return "spectrum:" + p.spectrum_path;
  }
  return "gaussian";
}

} // namespace

std::string render_config(const Scenario& s) {
  std::ostringstream os;
  os << "[photon]\n";
  os << "temporal = " << temporal_name(s.photon) << "\n";
  os << "spatial = " << (s.photon.spatial == SpatialKind::Sinc ? "sinc" : "box") << "\n";
  os << "omega_t = " << fmt(s.photon.omega_t) << "\n";
  os << "delta_t = " << fmt(s.photon.delta_t) << "\n";
  os << "omega_x = " << fmt(s.photon.omega_x) << "\n";
  os << "delta_x = " << fmt(s.photon.delta_x) << "\n";
  os << "t0 = " << fmt(s.photon.t0) << "\n";
  os << "x0 = " << fmt(s.photon.x0) << "\n";
  os << "tail_tol = " << fmt(s.photon.tail_tol) << "\n";
  os << "\n[geometry]\n";
  os << "x_source = " << fmt(s.geometry.x_source) << "\n";
  os << "x_bs1 = " << fmt(s.geometry.x_bs1) << "\n";
  os << "x_mirrors = " << fmt(s.geometry.x_mirrors) << "\n";
  os << "x_bs2 = " << fmt(s.geometry.x_bs2) << "\n";
  os << "x_detectors = " << fmt(s.geometry.x_detectors) << "\n";
  os << "\n[bs1]\n";
  os << "present_t = " << render_region(s.bs1) << "\n";
  render_extent(os, s.bs1);
  os << "\n[bs2]\n";
  os << "present_t = " << render_region(s.bs2) << "\n";
  render_extent(os, s.bs2);
  os << "\n[mirrors]\n";
  os << "kappa1 = " << fmt(s.kappa1) << "\n";
  os << "kappa2 = " << fmt(s.kappa2) << "\n";
  os << "\n[detector]\n";
  os << "eps_t = " << fmt(s.detector.eps_t) << "\n";
  os << "eps_x = " << (s.detector.eps_x_full ? std::string("full") : fmt(s.detector.eps_x)) << "\n";
  os << "tbar = " << fmt(s.detector.tbar_min) << ":" << fmt(s.detector.tbar_max)
     << ":" << fmt(s.detector.tbar_step) << "\n";
  os << "\n[grid]\n";
  os << "t = " << fmt(s.t_grid.min) << ":" << fmt(s.t_grid.max) << ":" << fmt(s.t_grid.h) << "\n";
  os << "x = " << fmt(s.x_grid.min) << ":" << fmt(s.x_grid.max) << ":" << fmt(s.x_grid.h) << "\n";
  return os.str();
}

std::string digest(const Scenario& s) {
  std::string text = render_config(s);
  uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

void check_invariants(const Scenario& s) {
  const Geometry& g = s.geometry;
  if (!(g.x_source < g.x_bs1 && g.x_bs1 < g.x_mirrors && g.x_mirrors < g.x_bs2 &&
        g.x_bs2 < g.x_detectors)) {
    throw ConfigError("geometry must satisfy x_source < x_bs1 < x_mirrors < x_bs2 < x_detectors");
  }

  for (double alpha : {g.alpha_bs1(), g.alpha_mirrors(), g.alpha_bs2(), g.alpha_detectors()}) {
    if (!commensurate(alpha, s.t_grid.h) || !commensurate(alpha, s.x_grid.h)) {
      std::ostringstream os;
      os << "shift " << alpha << " is not a whole number of grid cells (h_t="
         << s.t_grid.h << ", h_x=" << s.x_grid.h << ")";
      throw ConfigError(os.str());
    }
  }

  if (!(s.photon.omega_t > 0.0 && s.photon.delta_t > 0.0 && s.photon.omega_x > 0.0 &&
        s.photon.delta_x > 0.0)) {
    throw ConfigError("photon widths must be positive");
  }
  if (!(s.photon.tail_tol > 0.0)) throw ConfigError("tail_tol must be positive");

  if (!(s.detector.eps_t > 0.0)) throw ConfigError("eps_t must be positive");
  if (!s.detector.eps_x_full && !(s.detector.eps_x > 0.0))
    throw ConfigError("eps_x must be positive or 'full'");
  if (!(s.detector.tbar_step > 0.0) || !(s.detector.tbar_max >= s.detector.tbar_min))
    throw ConfigError("tbar sweep must satisfy min <= max and step > 0");

  for (const auto& region : {s.bs1, s.bs2}) {
    for (const auto& r : region.rects) {
      if (!(r.t_lo < r.t_hi) || !(r.x_lo < r.x_hi))
        throw ConfigError(region.label + " window bounds must satisfy lo < hi");
    }
  }

  // Photon support must stay inside the grid from emission to detection.
  double a7 = g.alpha_detectors();
  SupportSpan at_source = temporal_span(s.photon, s.photon.t0);
  SupportSpan at_det = temporal_span(s.photon, s.photon.t0 + a7);
  if (at_source.known) {
    double lo = std::min(at_source.lo, at_det.lo);
    double hi = std::max(at_source.hi, at_det.hi);
    if (lo < s.t_grid.min - 1e-12 || hi > s.t_grid.max + 1e-12) {
      std::ostringstream os;
      os << "temporal support [" << lo << ", " << hi
         << "] leaves the t grid [" << s.t_grid.min << ", " << s.t_grid.max
         << "] during the evolution";
      throw PhysicsError(os.str());
    }
  }
  if (s.photon.spatial == SpatialKind::Box) {
    double lo = s.photon.x0 - 0.5 * s.photon.delta_x;
    double hi = s.photon.x0 + a7 + 0.5 * s.photon.delta_x;
    if (lo < s.x_grid.min - 1e-12 || hi > s.x_grid.max + 1e-12) {
      throw PhysicsError("spatial box support leaves the x grid during the evolution");
    }
  } else {
    // Constructing at both extreme centers enforces the tail tolerance there.
    make_sinc_spatial(s.x_grid, s.photon.x0, s.photon.omega_x, s.photon.tail_tol);
    make_sinc_spatial(s.x_grid, s.photon.x0 + a7, s.photon.omega_x, s.photon.tail_tol);
  }

  if (s.photon.temporal == TemporalKind::Spectrum && !s.spectrum.has_value())
    throw ConfigError("spectrum temporal profile requires loaded spectrum data");
}

std::vector<std::string> validate(const Scenario& s) {
  std::vector<std::string> warnings;
  const double a7 = s.geometry.alpha_detectors();

  // Mass escaping the grid: rebuild each profile on a grid extended by the
  // original span on both sides and measure what falls outside the real grid.
  auto outside_mass = [&](bool temporal, double center) -> double {
    const AxisGrid& g = temporal ? s.t_grid : s.x_grid;
    double span = g.span();
    AxisGrid wide = AxisGrid::from_range(g.min - span, g.max + span, g.h);
    AmplitudeProfile prof;
    if (temporal) {
      Scenario probe = s;
      probe.photon.t0 = center;
      probe.t_grid = wide;
      prof = build_temporal_profile(probe);
    } else {
      Scenario probe = s;
      probe.photon.x0 = center;
      probe.x_grid = wide;
      probe.photon.tail_tol = 1.0; // measuring, not gating
      prof = build_spatial_profile(probe);
    }
    std::vector<double> dens(prof.grid.count);
    for (int i = 0; i < prof.grid.count; ++i) dens[i] = prof.magnitude_sq(i);
    double inside = integrate_interval(prof.grid, dens, g.min, g.max);
    return std::max(0.0, 1.0 - inside);
  };

  try {
    double out = std::max(outside_mass(true, s.photon.t0),
                          outside_mass(true, s.photon.t0 + a7));
    if (out > 1e-6) {
      std::ostringstream os;
      os << "photon temporal tail mass outside the grid is " << out;
      warnings.push_back(os.str());
    }
  } catch (const Error&) {
    warnings.push_back("could not estimate temporal tail mass outside the grid");
  }
  try {
    double out = std::max(outside_mass(false, s.photon.x0),
                          outside_mass(false, s.photon.x0 + a7));
    if (out > 1e-6) {
      std::ostringstream os;
      os << "photon spatial tail mass outside the grid is " << out;
      warnings.push_back(os.str());
    }
  } catch (const Error&) {
    warnings.push_back("could not estimate spatial tail mass outside the grid");
  }

  // Dead presence windows: the photon never overlaps the element's window.
  struct Probe {
    const SpacetimeRegion* region;
    double center;
  };
  const Probe probes[] = {
      {&s.bs1, s.photon.t0 + s.geometry.alpha_bs1()},
      {&s.bs2, s.photon.t0 + s.geometry.alpha_bs2()},
  };
  for (const auto& probe : probes) {
    if (probe.region->empty() || probe.region->is_all_spacetime()) continue;
    bool finite_t = false;
    for (const auto& r : probe.region->rects)
      if (std::isfinite(r.t_lo) || std::isfinite(r.t_hi)) finite_t = true;
    if (!finite_t) continue;
    try {
      double mass = window_overlap_mass(s, *probe.region, probe.center);
      if (mass <= 1e-12) {
        warnings.push_back(probe.region->label +
                           " presence window never overlaps the photon's temporal support (dead window)");
      }
    } catch (const Error&) {
      warnings.push_back("could not evaluate the photon overlap with the " +
                         probe.region->label + " presence window");
    }
  }

  // Detector windows clipped by the grid.
  double half = 0.5 * s.detector.eps_t;
  if (s.detector.tbar_min - half < s.t_grid.min || s.detector.tbar_max + half > s.t_grid.max)
    warnings.push_back("detector time windows are clipped by the t grid");
  if (!s.detector.eps_x_full) {
    double xbar = s.geometry.x_detectors;
    if (xbar - 0.5 * s.detector.eps_x < s.x_grid.min ||
        xbar + 0.5 * s.detector.eps_x > s.x_grid.max)
      warnings.push_back("detector space window is clipped by the x grid");
  }
  return warnings;
}

void set_param(Scenario& s, const std::string& key, const std::string& value) {
  auto as_double = [&](const std::string& v) { return parse_double(v, 0); };
  if (key == "omega_t") {
    s.photon.omega_t = as_double(value);
  } else if (key == "omega_x") {
    s.photon.omega_x = as_double(value);
  } else if (key == "kappa1") {
    s.kappa1 = as_double(value);
  } else if (key == "kappa2") {
    s.kappa2 = as_double(value);
  } else if (key == "bs1.present_t" || key == "bs2.present_t") {
    SpacetimeRegion& region = key[2] == '1' ? s.bs1 : s.bs2;
    double x_lo = kNegInf, x_hi = kPosInf;
    if (!region.rects.empty()) {
      x_lo = region.rects[0].x_lo;
      x_hi = region.rects[0].x_hi;
    }
    RawEntry entry{value, 0};
    RawEntry extent{fmt(x_lo) + ":" + fmt(x_hi), 0};
    bool finite_extent = x_lo != kNegInf && x_hi != kPosInf;
    region = build_region(region.label, &entry, finite_extent ? &extent : nullptr);
  } else {
    throw ConfigError("unknown sweep parameter: " + key);
  }
  check_invariants(s);
}

TemporalProfile build_temporal_profile(const Scenario& s) {
  switch (s.photon.temporal) {
    case TemporalKind::Box:
      return make_box_temporal(s.t_grid, s.photon.t0, s.photon.delta_t);
    case TemporalKind::Gaussian:
      return make_gaussian_temporal(s.t_grid, s.photon.t0, s.photon.omega_t);
    case TemporalKind::ExpForward:
      return make_exp_tail_temporal(s.t_grid, s.photon.t0, s.photon.omega_t,
                                    TailDirection::Forward);
    case TemporalKind::ExpBackward:
      return make_exp_tail_temporal(s.t_grid, s.photon.t0, s.photon.omega_t,
                                    TailDirection::Backward);
    case TemporalKind::Spectrum:
      if (!s.spectrum.has_value())
        throw ConfigError("spectrum temporal profile requires loaded spectrum data");
      return synthesize_from_spectrum(s.t_grid, *s.spectrum, s.photon.t0);
  }
  throw InvalidArgument("unhandled temporal kind");
}

SpatialProfile build_spatial_profile(const Scenario& s) {
  if (s.photon.spatial == SpatialKind::Box)
    return make_box_spatial(s.x_grid, s.photon.x0, s.photon.delta_x);
  return make_sinc_spatial(s.x_grid, s.photon.x0, s.photon.omega_x,
                           s.photon.tail_tol);
}

} // namespace pevmzi
