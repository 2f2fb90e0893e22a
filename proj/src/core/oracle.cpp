#include "core/oracle.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "core/errors.hpp"

namespace pevmzi::oracle {

namespace {

using std::numbers::pi;

/// Analytic unit-mass temporal density for the closed-form profile kinds.
std::function<double(double)> density_fn(TemporalKind kind, double width,
                                         double center) {
  switch (kind) {
    case TemporalKind::Box: {
      // Closed support: the boundary choice is measure zero in the continuum
      // and a closed interval keeps the trapezoid rule exact on the edges.
      double half = 0.5 * width;
      double amp = 1.0 / width;
      return [=](double t) {
        double s = t - center;
        return (s >= -half && s <= half) ? amp : 0.0;
      };
    }
    case TemporalKind::Gaussian: {
      double pref = 1.0 / (width * std::sqrt(pi));
      double inv = 1.0 / (width * width);
      return [=](double t) {
        double s = t - center;
        return pref * std::exp(-s * s * inv);
      };
    }
    case TemporalKind::ExpForward: {
      double pref = 4.0 * width * width * width;
      return [=](double t) {
        double s = t - center;
        return s >= 0.0 ? pref * s * s * std::exp(-2.0 * width * s) : 0.0;
      };
    }
    case TemporalKind::ExpBackward: {
      double pref = 4.0 * width * width * width;
      return [=](double t) {
        double s = center - t;
        return s >= 0.0 ? pref * s * s * std::exp(-2.0 * width * s) : 0.0;
      };
    }
    case TemporalKind::Spectrum:
      break;
  }
  throw InvalidArgument("oracle has no analytic density for this profile kind");
}

double trapezoid(const std::function<double(double)>& f, double lo, double hi,
                 double h) {
  long n = std::max<long>(1, std::lround(std::ceil((hi - lo) / h)));
  double step = (hi - lo) / static_cast<double>(n);
  double acc = 0.5 * (f(lo) + f(hi));
  for (long i = 1; i < n; ++i) acc += f(lo + step * static_cast<double>(i));
  return acc * step;
}

using Mat = std::array<std::complex<double>, 4>;

Mat matmul(const Mat& a, const Mat& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

} // namespace

OracleResult overlap_fraction(TemporalKind kind, double width, double center,
                              double lo, double hi) {
  if (!(hi > lo)) throw InvalidArgument("overlap window must satisfy lo < hi");
  auto f = density_fn(kind, width, center);
  const double h = 1e-4;
  double coarse = trapezoid(f, lo, hi, h);
  double fine = trapezoid(f, lo, hi, 0.5 * h);
  OracleResult r;
  r.value = fine;
  r.estimated_error = std::abs(fine - coarse) / 3.0;
  r.h_used = 0.5 * h;
  return r;
}

OracleResult peak_location(TemporalKind kind, double width, double center) {
  auto f = density_fn(kind, width, center);
  double span = 25.0 / width;
  double lo = center - span;
  double hi = center + span;
  const long n = 500000;
  double step = (hi - lo) / n;
  double best_t = lo;
  double best_v = f(lo);
  for (long i = 1; i <= n; ++i) {
    double t = lo + step * static_cast<double>(i);
    double v = f(t);
    if (v > best_v) {
      best_v = v;
      best_t = t;
    }
  }
  return {best_t, step, step};
}

std::array<std::complex<double>, 4> channel_pipeline_matrix(bool bs1_on,
                                                            bool bs2_on,
                                                            double kappa1,
                                                            double kappa2) {
  const double r = 1.0 / std::sqrt(2.0);
  const Mat identity = {1.0, 0.0, 0.0, 1.0};
  const Mat b1 = {r, -r, r, r};
  const Mat b2 = {r, r, -r, r};
  const Mat mirror = {std::polar(1.0, kappa1), 0.0, 0.0, std::polar(1.0, kappa2)};
  Mat m = matmul(mirror, bs1_on ? b1 : identity);
  return matmul(bs2_on ? b2 : identity, m);
}

double DenseDensity::total_mass() const {
  double acc = 0.0;
  for (int i = 0; i < t_grid.count; ++i) {
    double wt = (i == 0 || i == t_grid.count - 1) ? 0.5 * t_grid.h : t_grid.h;
    for (int j = 0; j < x_grid.count; ++j) {
      double wx = (j == 0 || j == x_grid.count - 1) ? 0.5 * x_grid.h : x_grid.h;
      size_t idx = static_cast<size_t>(i) * x_grid.count + j;
      acc += (d1[idx] + d2[idx]) * wt * wx;
    }
  }
  return acc;
}

DenseDensity dense_reference_density(const Scenario& sc) {
  if (sc.t_grid.count > 201 || sc.x_grid.count > 201)
    throw InvalidArgument("dense reference density expects a small grid (<= 201 nodes per axis)");

  // Amplitude shapes, written out here rather than taken from the profile
  // constructors.
  std::function<double(double)> shape_t;
  switch (sc.photon.temporal) {
    case TemporalKind::Box: {
      double half = 0.5 * sc.photon.delta_t;
      shape_t = [=](double s) { return (s >= -half && s < half) ? 1.0 : 0.0; };
      break;
    }
    case TemporalKind::Gaussian: {
      double inv = 1.0 / (2.0 * sc.photon.omega_t * sc.photon.omega_t);
      shape_t = [=](double s) { return std::exp(-s * s * inv); };
      break;
    }
    case TemporalKind::ExpForward: {
      double w = sc.photon.omega_t;
      shape_t = [=](double s) { return s >= 0.0 ? s * std::exp(-w * s) : 0.0; };
      break;
    }
    case TemporalKind::ExpBackward: {
      double w = sc.photon.omega_t;
      shape_t = [=](double s) { return s <= 0.0 ? -s * std::exp(w * s) : 0.0; };
      break;
    }
    case TemporalKind::Spectrum:
      throw InvalidArgument("dense reference density supports analytic profile kinds only");
  }
  std::function<double(double)> shape_x;
  if (sc.photon.spatial == SpatialKind::Box) {
    double half = 0.5 * sc.photon.delta_x;
    shape_x = [=](double s) { return (s >= -half && s < half) ? 1.0 : 0.0; };
  } else {
    double w = sc.photon.omega_x;
    shape_x = [=](double s) {
      double u = w * s;
      return u == 0.0 ? 1.0 : std::sin(u) / u;
    };
  }

  auto sample_normalized = [](const AxisGrid& g, const std::function<double(double)>& f,
                              double center) {
    std::vector<double> v(g.count);
    for (int i = 0; i < g.count; ++i) v[i] = f(g.min + i * g.h - center);
    double mass = 0.0;
    for (int i = 0; i < g.count; ++i) {
      double w = (i == 0 || i == g.count - 1) ? 0.5 * g.h : g.h;
      mass += v[i] * v[i] * w;
    }
    double scale = 1.0 / std::sqrt(mass);
    for (double& s : v) s *= scale;
    return v;
  };

  const double a7 = sc.geometry.alpha_detectors();
  std::vector<double> st =
      sample_normalized(sc.t_grid, shape_t, sc.photon.t0 + a7);
  std::vector<double> sx =
      sample_normalized(sc.x_grid, shape_x, sc.photon.x0 + a7);

  auto in_region = [](const SpacetimeRegion& region, double t, double x) {
    for (const auto& r : region.rects) {
      if (t >= r.t_lo && t <= r.t_hi && x >= r.x_lo && x <= r.x_hi) return true;
    }
    return false;
  };

  const double back1 = a7 - sc.geometry.alpha_bs1();
  const double back2 = a7 - sc.geometry.alpha_bs2();

  DenseDensity out;
  out.t_grid = sc.t_grid;
  out.x_grid = sc.x_grid;
  out.d1.assign(static_cast<size_t>(sc.t_grid.count) * sc.x_grid.count, 0.0);
  out.d2.assign(out.d1.size(), 0.0);

  for (int i = 0; i < sc.t_grid.count; ++i) {
    double t = sc.t_grid.min + i * sc.t_grid.h;
    for (int j = 0; j < sc.x_grid.count; ++j) {
      double x = sc.x_grid.min + j * sc.x_grid.h;
      double gamma2 = st[i] * st[i] * sx[j] * sx[j];
      size_t idx = static_cast<size_t>(i) * sc.x_grid.count + j;
      if (gamma2 == 0.0) continue;
      bool in1 = in_region(sc.bs1, t - back1, x - back1);
      bool in2 = in_region(sc.bs2, t - back2, x - back2);
      Mat m = channel_pipeline_matrix(in1, in2, sc.kappa1, sc.kappa2);
      // Column acting on the channel-1 input (1, 0).
      out.d1[idx] = gamma2 * std::norm(m[0]);
      out.d2[idx] = gamma2 * std::norm(m[2]);
    }
  }
  return out;
}

std::vector<FixtureRow> fixture_rows() {
  std::vector<FixtureRow> rows;
  auto add_overlap = [&](const std::string& name, TemporalKind kind, double width,
                         double center, double lo, double hi,
                         const std::string& desc) {
    OracleResult r = overlap_fraction(kind, width, center, lo, hi);
    rows.push_back({name, r.value, r.estimated_error, "overlap_fraction", desc});
  };

  add_overlap("gauss_mass_18_21_center15", TemporalKind::Gaussian, 1.0, 15.0, 18.0,
              21.0, "gaussian omega_t=1 center=15 window=18:21");
  add_overlap("gauss_mass_18_21_center15_omega0.5", TemporalKind::Gaussian, 0.5,
              15.0, 18.0, 21.0, "gaussian omega_t=0.5 center=15 window=18:21");
  add_overlap("gauss_mass_18_21_center15_omega2", TemporalKind::Gaussian, 2.0,
              15.0, 18.0, 21.0, "gaussian omega_t=2 center=15 window=18:21");
  add_overlap("fwd_tail_mass_16.5_19.5_center15", TemporalKind::ExpForward, 1.0,
              15.0, 16.5, 19.5, "exp_forward omega_t=1 center=15 window=16.5:19.5");
  add_overlap("bwd_tail_mass_16.5_19.5_center15", TemporalKind::ExpBackward, 1.0,
              15.0, 16.5, 19.5, "exp_backward omega_t=1 center=15 window=16.5:19.5");
  add_overlap("bwd_tail_mass_1.5_4.5_center5", TemporalKind::ExpBackward, 1.0, 5.0,
              1.5, 4.5, "exp_backward omega_t=1 center=5 window=1.5:4.5");
  add_overlap("gauss_mass_1.5_4.5_center5", TemporalKind::Gaussian, 1.0, 5.0, 1.5,
              4.5, "gaussian omega_t=1 center=5 window=1.5:4.5");
  add_overlap("gauss_mass_16.5_19.5_center15", TemporalKind::Gaussian, 1.0, 15.0,
              16.5, 19.5, "gaussian omega_t=1 center=15 window=16.5:19.5");
  add_overlap("gauss_mass_6.5_7.5_center5", TemporalKind::Gaussian, 1.0, 5.0, 6.5,
              7.5, "gaussian omega_t=1 center=5 window=6.5:7.5");
  add_overlap("gauss_mass_6.5_9.5_center15", TemporalKind::Gaussian, 1.0, 15.0,
              6.5, 9.5, "gaussian omega_t=1 center=15 window=6.5:9.5");
  add_overlap("gauss_mass_14_16_center15", TemporalKind::Gaussian, 1.0, 15.0, 14.0,
              16.0, "gaussian omega_t=1 center=15 window=14:16");
  add_overlap("box_mass_4_6_center5", TemporalKind::Box, 2.0, 5.0, 4.0, 6.0,
              "box delta_t=2 center=5 window=4:6");

  OracleResult peak = peak_location(TemporalKind::ExpForward, 1.0, 0.0);
  rows.push_back({"fwd_tail_peak_omega1", peak.value, peak.estimated_error,
                  "peak_location", "exp_forward omega_t=1 center=0"});
  return rows;
}

void write_fixture_file(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open fixture file for writing: " + path);
  out << "name,value,estimated_error,oracle_op,params\n";
  char buf[512];
  for (const auto& row : fixture_rows()) {
    std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%s,%s\n", row.name.c_str(),
                  row.value, row.estimated_error, row.op.c_str(),
                  row.params.c_str());
    out << buf;
  }
  if (!out) throw IoError("failed writing fixture file: " + path);
}

std::vector<FixtureRow> parse_fixture_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open fixture file: " + path);
  std::vector<FixtureRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::istringstream ls(line);
    FixtureRow row;
    std::string value, err;
    if (!std::getline(ls, row.name, ',') || !std::getline(ls, value, ',') ||
        !std::getline(ls, err, ',') || !std::getline(ls, row.op, ',') ||
        !std::getline(ls, row.params)) {
      throw ConfigError("malformed fixture row: " + line);
    }
    row.value = std::strtod(value.c_str(), nullptr);
    row.estimated_error = std::strtod(err.c_str(), nullptr);
    rows.push_back(std::move(row));
  }
  return rows;
}

} // namespace pevmzi::oracle
