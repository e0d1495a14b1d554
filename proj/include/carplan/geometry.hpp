// Copyright (c) 2026 The carplan authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "carplan/error.hpp"

namespace carplan {

/// Global tolerance for tangency/incidence tests, in world units.
inline constexpr double kGeomEps = 1e-9;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wrap an angle to [0, 2pi).
inline double normalize_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// Smallest signed difference a - b, wrapped to (-pi, pi].
inline double angle_diff(double a, double b) {
  return std::remainder(a - b, kTwoPi);
}

/// Absolute angular distance between two angles, in [0, pi].
inline double angle_distance(double a, double b) {
  return std::abs(angle_diff(a, b));
}

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
  friend Point operator*(Point p, double s) { return {s * p.x, s * p.y}; }
  friend bool operator==(Point a, Point b) { return a.x == b.x && a.y == b.y; }

  double norm() const { return std::hypot(x, y); }
  double norm_sq() const { return x * x + y * y; }
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double distance(Point a, Point b) { return (a - b).norm(); }
inline double distance_sq(Point a, Point b) { return (a - b).norm_sq(); }
inline Point midpoint(Point a, Point b) {
  return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
}
inline Point unit_vector(double angle) {
  return {std::cos(angle), std::sin(angle)};
}
/// Left-hand normal (rotate +90 degrees).
inline Point left_normal(Point v) { return {-v.y, v.x}; }

inline Point normalized(Point v) {
  const double n = v.norm();
  return n > 0.0 ? Point{v.x / n, v.y / n} : Point{};
}

/// Planar car state: position plus heading. Heading is stored normalized
/// to [0, 2pi).
struct Pose {
  Point position{};
  double heading = 0.0;

  Pose() = default;
  Pose(Point pos, double theta) : position(pos), heading(normalize_angle(theta)) {}
  Pose(double x, double y, double theta)
      : position{x, y}, heading(normalize_angle(theta)) {}

  Point direction() const { return unit_vector(heading); }
};

inline bool poses_close(const Pose& a, const Pose& b, double pos_tol,
                        double heading_tol) {
  return distance(a.position, b.position) <= pos_tol &&
         angle_distance(a.heading, b.heading) <= heading_tol;
}

struct Segment {
  Point start{};
  Point end{};

  double length() const { return distance(start, end); }
  Point direction() const { return normalized(end - start); }
  Point point_at(double s) const {
    const double len = length();
    if (len <= 0.0) return start;
    return start + (s / len) * (end - start);
  }
};

/// Circular arc. Positive sweep runs counter-clockwise. The start point is
/// center + radius * (cos start_angle, sin start_angle).
struct Arc {
  Point center{};
  double radius = 1.0;
  double start_angle = 0.0;
  double sweep = 0.0;

  double length() const { return radius * std::abs(sweep); }
  double end_angle() const { return start_angle + sweep; }

  Point point_at_angle(double angle) const {
    return center + radius * unit_vector(angle);
  }
  Point start_point() const { return point_at_angle(start_angle); }
  Point end_point() const { return point_at_angle(end_angle()); }

  /// Angle of the point at arc-length s from the start (s in [0, length]).
  double angle_at(double s) const {
    const double dir = sweep >= 0.0 ? 1.0 : -1.0;
    return start_angle + dir * (s / radius);
  }

  /// Tangent heading in traversal direction at parameter angle.
  double tangent_at_angle(double angle) const {
    return sweep >= 0.0 ? angle + kPi / 2.0 : angle - kPi / 2.0;
  }
};

/// Segment-arc-segment corner transition. Lead segments may be zero-length.
/// The arc is tangent to both segment directions; a zero-sweep arc marks the
/// degenerate collinear case (pure straight line).
struct Fillet {
  Segment lead_in{};
  Arc arc{};
  Segment lead_out{};

  bool degenerate() const { return arc.sweep == 0.0; }
  Point start() const { return lead_in.start; }
  Point end() const { return lead_out.end; }
};

/**
 * Round the corner prev-corner-next with an arc of the given radius.
 *
 * The arc is tangent to rays corner->prev and corner->next at distance
 * t = radius / tan(phi) from the corner, where phi is half the interior
 * angle. The lead-in starts at the midpoint of (prev, corner) and the
 * lead-out ends at the midpoint of (corner, next). Collinear pass-through
 * input yields a degenerate fillet (zero-sweep arc, straight line between
 * the midpoints).
 */
inline Result<Fillet> fillet_corner(Point prev, Point corner, Point next,
                                    double radius) {
  if (radius <= 0.0) {
    return Result<Fillet>(Errc::invalid_argument, "fillet radius must be > 0");
  }
  const Point e1 = corner - prev;
  const Point e2 = next - corner;
  const double len1 = e1.norm();
  const double len2 = e2.norm();
  if (len1 <= kGeomEps || len2 <= kGeomEps || distance(prev, next) <= kGeomEps) {
    return Result<Fillet>(Errc::degenerate_corner,
                          "prev, corner, next must be distinct");
  }

  const Point m1 = midpoint(prev, corner);
  const Point m2 = midpoint(corner, next);
  const double cr = cross(e1, e2);
  const double dt = dot(e1, e2);

  // Scale-invariant collinearity test.
  if (std::abs(cr) < kGeomEps * len1 * len2) {
    if (dt > 0.0) {
      // Straight pass-through: zero-sweep arc anchored at the corner.
      const Point u = normalized(e1);
      const Point center = corner + radius * left_normal(u);
      Fillet f;
      f.lead_in = Segment{m1, corner};
      f.arc = Arc{center, radius,
                  std::atan2(corner.y - center.y, corner.x - center.x), 0.0};
      f.lead_out = Segment{corner, m2};
      return f;
    }
    return Result<Fillet>(Errc::reversal_corner,
                          "path doubles back exactly at corner");
  }

  const Point u1 = normalized(e1);
  const Point u2 = normalized(e2);
  const double turn = std::atan2(std::abs(cr) / (len1 * len2), dt / (len1 * len2));
  // turn in (0, pi): exterior angle; interior angle = pi - turn.
  const double t = radius * std::tan(0.5 * turn);
  if (t > 0.5 * len1 || t > 0.5 * len2) {
    return Result<Fillet>(Errc::turn_too_tight,
                          "tangent length exceeds a half-edge");
  }

  const Point t1 = corner - t * u1;
  const Point t2 = corner + t * u2;
  const double side = cr > 0.0 ? 1.0 : -1.0;
  const Point n1 = side * left_normal(u1);
  const Point center = t1 + radius * n1;
  const double start_angle = std::atan2(t1.y - center.y, t1.x - center.x);

  Fillet f;
  f.lead_in = Segment{m1, t1};
  f.arc = Arc{center, radius, start_angle, side * turn};
  f.lead_out = Segment{t2, m2};
  return f;
}

struct LineIntersection {
  Point point{};
  double dist_a = 0.0;  ///< signed distance from a.position to the intersection
  double dist_b = 0.0;  ///< signed distance from the intersection to b.position
};

/// Intersect the heading line of a with the heading line of b.
inline Result<LineIntersection> heading_intersection(const Pose& a,
                                                     const Pose& b) {
  const Point ua = a.direction();
  const Point ub = b.direction();
  const double det = cross(ua, ub);
  if (std::abs(det) < kGeomEps) {
    return Result<LineIntersection>(Errc::parallel_headings,
                                    "heading lines are parallel");
  }
  const Point delta = b.position - a.position;
  // a.position + da*ua = b.position - db*ub
  const double da = cross(delta, ub) / det;
  const double db = cross(ua, delta) / det;
  return LineIntersection{a.position + da * ua, da, db};
}

/// Pose on the arc at arc-length s from its start, heading tangent to the
/// arc in traversal direction.
inline Result<Pose> arc_point_at(const Arc& arc, double s) {
  const double len = arc.length();
  if (s < 0.0 || s > len) {
    return Result<Pose>(Errc::out_of_range, "arc-length outside [0, length]");
  }
  const double angle = arc.angle_at(s);
  return Pose{arc.point_at_angle(angle), arc.tangent_at_angle(angle)};
}

inline double distance_point_segment(Point p, const Segment& seg) {
  const Point d = seg.end - seg.start;
  const double len_sq = d.norm_sq();
  if (len_sq <= 0.0) return distance(p, seg.start);
  double u = dot(p - seg.start, d) / len_sq;
  u = std::clamp(u, 0.0, 1.0);
  return distance(p, seg.start + u * d);
}

}  // namespace carplan
