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

#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "carplan/geometry.hpp"

namespace carplan {

namespace detail {

/// Orientation of c relative to the directed line a->b, with a
/// scale-relative collinearity band: +1 left, -1 right, 0 collinear.
inline int orientation(Point a, Point b, Point c) {
  const double v = cross(b - a, c - a);
  const double scale = distance(a, b) * (distance(a, c) + distance(b, c));
  if (std::abs(v) <= kGeomEps * std::max(1.0, scale)) return 0;
  return v > 0.0 ? 1 : -1;
}

inline bool on_segment_collinear(Point a, Point b, Point p) {
  return std::min(a.x, b.x) - kGeomEps <= p.x &&
         p.x <= std::max(a.x, b.x) + kGeomEps &&
         std::min(a.y, b.y) - kGeomEps <= p.y &&
         p.y <= std::max(a.y, b.y) + kGeomEps;
}

/// True if segments pq and rs share at least one point (touching counts).
inline bool segments_intersect(Point p, Point q, Point r, Point s) {
  const int o1 = orientation(p, q, r);
  const int o2 = orientation(p, q, s);
  const int o3 = orientation(r, s, p);
  const int o4 = orientation(r, s, q);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment_collinear(p, q, r)) return true;
  if (o2 == 0 && on_segment_collinear(p, q, s)) return true;
  if (o3 == 0 && on_segment_collinear(r, s, p)) return true;
  if (o4 == 0 && on_segment_collinear(r, s, q)) return true;
  return false;
}

}  // namespace detail

/// Simple polygon, normalized to counter-clockwise vertex order on
/// construction. Use make() for untrusted input; unchecked() skips the
/// simplicity test for geometry that is valid by construction.
class Polygon {
 public:
  Polygon() = default;

  static Result<Polygon> make(std::vector<Point> vertices) {
    if (vertices.size() < 3) {
      return Result<Polygon>(Errc::invalid_polygon,
                             "polygon needs at least 3 vertices");
    }
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point a = vertices[i];
      const Point b = vertices[(i + 1) % n];
      if (distance(a, b) <= kGeomEps) {
        return Result<Polygon>(Errc::invalid_polygon,
                               "duplicate consecutive vertices at index " +
                                   std::to_string(i));
      }
    }
    if (std::abs(signed_area(vertices)) <= kGeomEps) {
      return Result<Polygon>(Errc::invalid_polygon, "polygon has zero area");
    }
    if (self_intersects(vertices)) {
      return Result<Polygon>(Errc::invalid_polygon,
                             "polygon is self-intersecting");
    }
    return unchecked(std::move(vertices));
  }

  /// Normalizes orientation only; the caller guarantees simplicity.
  static Polygon unchecked(std::vector<Point> vertices) {
    if (signed_area(vertices) < 0.0) {
      std::vector<Point> rev(vertices.rbegin(), vertices.rend());
      vertices = std::move(rev);
    }
    Polygon p;
    p.verts_ = std::move(vertices);
    return p;
  }

  const std::vector<Point>& vertices() const { return verts_; }
  std::size_t size() const { return verts_.size(); }
  Point operator[](std::size_t i) const { return verts_[i]; }

  Segment edge(std::size_t i) const {
    return Segment{verts_[i], verts_[(i + 1) % verts_.size()]};
  }

  double area() const { return signed_area(verts_); }

  /// Even-odd containment test. Points on the boundary are not guaranteed
  /// a stable answer; pair with boundary_distance when that matters.
  bool contains(Point p) const {
    bool inside = false;
    const std::size_t n = verts_.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Point a = verts_[i];
      const Point b = verts_[j];
      if ((a.y > p.y) != (b.y > p.y)) {
        const double x_int = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
        if (p.x < x_int) inside = !inside;
      }
    }
    return inside;
  }

  double boundary_distance(Point p) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < verts_.size(); ++i) {
      best = std::min(best, distance_point_segment(p, edge(i)));
    }
    return best;
  }

  static double signed_area(const std::vector<Point>& v) {
    double a = 0.0;
    const std::size_t n = v.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      a += cross(v[j], v[i]);
    }
    return 0.5 * a;
  }

 private:
  static bool self_intersects(const std::vector<Point>& v) {
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point a = v[i];
      const Point b = v[(i + 1) % n];
      // Adjacent edge folding back over this one.
      const Point c = v[(i + 2) % n];
      if (detail::orientation(a, b, c) == 0 && dot(b - a, c - b) < 0.0) {
        return true;
      }
      for (std::size_t j = i + 2; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;  // adjacent around the wrap
        if (detail::segments_intersect(a, b, v[j], v[(j + 1) % n])) {
          return true;
        }
      }
    }
    return false;
  }

  std::vector<Point> verts_;
};

/// 0 if p is inside or on the boundary, else distance to the nearest
/// boundary point.
inline double distance_point_polygon(Point p, const Polygon& poly) {
  const double d = poly.boundary_distance(p);
  return poly.contains(p) ? 0.0 : d;
}

/// True if the polygons share any point (boundary contact counts).
inline bool polygons_overlap(const Polygon& a, const Polygon& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Segment ea = a.edge(i);
    for (std::size_t j = 0; j < b.size(); ++j) {
      const Segment eb = b.edge(j);
      if (detail::segments_intersect(ea.start, ea.end, eb.start, eb.end)) {
        return true;
      }
    }
  }
  return a.contains(b[0]) || b.contains(a[0]);
}

/// Minimum distance between two polygons; 0 when they overlap or touch.
inline double polygon_distance(const Polygon& a, const Polygon& b) {
  if (polygons_overlap(a, b)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i) {
    best = std::min(best, b.boundary_distance(a[i]));
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    best = std::min(best, a.boundary_distance(b[j]));
  }
  return best;
}

}  // namespace carplan
