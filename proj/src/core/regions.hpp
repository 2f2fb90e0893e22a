#pragma once

#include <limits>
#include <string>
#include <vector>

namespace pevmzi {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// Axis-aligned spacetime rectangle; infinite bounds allowed.
struct Rect {
  double t_lo = kNegInf;
  double t_hi = kPosInf;
  double x_lo = kNegInf;
  double x_hi = kPosInf;

  bool operator==(const Rect&) const = default;
};

/// Presence region of an interferometer element: a union of rectangles.
/// Membership uses closed intervals; an empty rect list means the element
/// is never present.
struct SpacetimeRegion {
  std::vector<Rect> rects;
  std::string label;

  static SpacetimeRegion never(std::string label);
  static SpacetimeRegion always(std::string label);

  bool empty() const { return rects.empty(); }
  bool is_all_spacetime() const;

  /// True unless some rect restricts the x axis.
  bool x_unbounded() const;

  bool contains(double t, double x) const;

  /// Membership of the point carried back along the worldline x = t:
  /// contains(t - shift, x - shift).
  bool contains_shifted(double t, double x, double shift) const;

  /// Region translated diagonally by delta (both axes).
  SpacetimeRegion shifted(double delta) const;

  /// Sorted finite t-axis edges (membership can only change there).
  std::vector<double> t_edges() const;
  /// Sorted finite x-axis edges.
  std::vector<double> x_edges() const;

  bool operator==(const SpacetimeRegion&) const = default;
};

} // namespace pevmzi
