#include "core/regions.hpp"

#include <algorithm>
#include <cmath>

namespace pevmzi {

SpacetimeRegion SpacetimeRegion::never(std::string label) {
  SpacetimeRegion r;
  r.label = std::move(label);
  return r;
}

SpacetimeRegion SpacetimeRegion::always(std::string label) {
  SpacetimeRegion r;
  r.label = std::move(label);
  r.rects.push_back(Rect{});
  return r;
}

bool SpacetimeRegion::is_all_spacetime() const {
  for (const auto& r : rects) {
    if (r.t_lo == kNegInf && r.t_hi == kPosInf && r.x_lo == kNegInf &&
        r.x_hi == kPosInf)
      return true;
  }
  return false;
}

bool SpacetimeRegion::x_unbounded() const {
  for (const auto& r : rects) {
    if (r.x_lo != kNegInf || r.x_hi != kPosInf) return false;
  }
  return true;
}

bool SpacetimeRegion::contains(double t, double x) const {
  for (const auto& r : rects) {
    if (t >= r.t_lo && t <= r.t_hi && x >= r.x_lo && x <= r.x_hi) return true;
  }
  return false;
}

bool SpacetimeRegion::contains_shifted(double t, double x, double shift) const {
  return contains(t - shift, x - shift);
}

SpacetimeRegion SpacetimeRegion::shifted(double delta) const {
  SpacetimeRegion out;
  out.label = label;
  out.rects.reserve(rects.size());
  for (const auto& r : rects) {
    Rect s = r;
    if (s.t_lo != kNegInf) s.t_lo += delta;
    if (s.t_hi != kPosInf) s.t_hi += delta;
    if (s.x_lo != kNegInf) s.x_lo += delta;
    if (s.x_hi != kPosInf) s.x_hi += delta;
    out.rects.push_back(s);
  }
  return out;
}

namespace {
std::vector<double> finite_sorted(std::vector<double> v) {
  std::erase_if(v, [](double d) { return !std::isfinite(d); });
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}
} // namespace

std::vector<double> SpacetimeRegion::t_edges() const {
  std::vector<double> v;
  for (const auto& r : rects) {
    v.push_back(r.t_lo);
    v.push_back(r.t_hi);
  }
  return finite_sorted(std::move(v));
}

std::vector<double> SpacetimeRegion::x_edges() const {
  std::vector<double> v;
  for (const auto& r : rects) {
    v.push_back(r.x_lo);
    v.push_back(r.x_hi);
  }
  return finite_sorted(std::move(v));
}

} // namespace pevmzi
