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
#include <vector>

#include "carplan/path.hpp"
#include "carplan/polygon.hpp"

namespace carplan {

/// Rectangular car body. The reference point sits ref_offset ahead of the
/// rear edge along the body axis; poses place this point. ref_offset = 0
/// is the rear-axle convention.
struct CarModel {
  double length = 1.0;
  double width = 0.5;
  double ref_offset = 0.0;
  double min_turn_radius = 1.0;

  /// Largest distance from the reference point to a body corner.
  double circumradius() const {
    const double ahead = std::max(ref_offset, length - ref_offset);
    return std::hypot(ahead, 0.5 * width);
  }

  Result<void> validate() const {
    if (!(length > 0.0) || !(width > 0.0) || !(min_turn_radius > 0.0)) {
      return Result<void>(Errc::invalid_argument,
                          "car length, width and min_turn_radius must be > 0");
    }
    if (ref_offset < 0.0 || ref_offset > length) {
      return Result<void>(Errc::invalid_argument,
                          "ref_offset must lie in [0, length]");
    }
    return {};
  }
};

struct Bounds {
  double xmin = 0.0, ymin = 0.0, xmax = 1.0, ymax = 1.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double diagonal() const { return std::hypot(width(), height()); }

  bool contains(Point p, double margin = 0.0) const {
    return p.x >= xmin + margin && p.x <= xmax - margin &&
           p.y >= ymin + margin && p.y <= ymax - margin;
  }

  /// Distance from an interior point to the nearest wall (negative outside).
  double interior_distance(Point p) const {
    return std::min(std::min(p.x - xmin, xmax - p.x),
                    std::min(p.y - ymin, ymax - p.y));
  }
};

/// Polygonal world. The bounds act as a containing obstacle: the footprint
/// must stay inside.
struct Scene {
  Bounds bounds{};
  std::vector<Polygon> obstacles;
  CarModel car{};
};

/// Discretization of swept collision checks.
struct SweepCheckConfig {
  double step = 0.1;   ///< arc-length between sampled poses
  double margin = 0.0; ///< obstacle inflation for conservative mode

  /// Margin that makes pose sampling at the given step sound: covers the
  /// largest footprint-point excursion between consecutive samples
  /// (step/2 of travel plus the heading-drift sweep of the body corners).
  static double conservative_margin(const CarModel& car, double step) {
    return 0.5 * step * (1.0 + car.circumradius() / car.min_turn_radius);
  }

  /// Default sampling config for a scene: step = 0.1 * min_turn_radius,
  /// margin 0 (fast approximate mode) or the conservative bound.
  static SweepCheckConfig for_scene(const Scene& scene,
                                    bool conservative = false) {
    SweepCheckConfig cfg;
    cfg.step = 0.1 * scene.car.min_turn_radius;
    cfg.margin = conservative ? conservative_margin(scene.car, cfg.step) : 0.0;
    return cfg;
  }
};

/// The car's rectangle placed with its reference point at pose.position and
/// body axis along pose.heading.
inline Polygon footprint_at(const Scene& scene, const Pose& pose) {
  const CarModel& car = scene.car;
  const double c = std::cos(pose.heading);
  const double s = std::sin(pose.heading);
  const double back = -car.ref_offset;
  const double front = car.length - car.ref_offset;
  const double half_w = 0.5 * car.width;
  const auto to_world = [&](double bx, double by) {
    return Point{pose.position.x + bx * c - by * s,
                 pose.position.y + bx * s + by * c};
  };
  return Polygon::unchecked({to_world(back, -half_w), to_world(front, -half_w),
                             to_world(front, half_w), to_world(back, half_w)});
}

/// True iff the footprint intersects any obstacle inflated by margin or
/// exits the scene bounds (inflated inward by the same margin).
inline bool pose_in_collision(const Scene& scene, const Pose& pose,
                              double margin = 0.0) {
  const Polygon fp = footprint_at(scene, pose);
  for (const Point& v : fp.vertices()) {
    if (!scene.bounds.contains(v, margin)) return true;
  }
  for (const Polygon& obs : scene.obstacles) {
    if (margin > 0.0) {
      if (polygon_distance(fp, obs) < margin) return true;
    } else if (polygons_overlap(fp, obs)) {
      return true;
    }
  }
  return false;
}

/// Sampled sweep check: poses along the primitive at arc-length interval
/// <= cfg.step (both endpoints always included). Approximate at margin 0;
/// sound when cfg.margin >= conservative_margin(car, step).
inline bool primitive_in_collision(const Scene& scene,
                                   const MotionPrimitive& prim,
                                   const SweepCheckConfig& cfg) {
  const double len = prim.length();
  const int n = std::max(1, static_cast<int>(std::ceil(len / cfg.step)));
  for (int i = 0; i <= n; ++i) {
    const double s = len * static_cast<double>(i) / static_cast<double>(n);
    if (pose_in_collision(scene, prim.pose_at(s), cfg.margin)) return true;
  }
  return false;
}

/// Minimum distance from the footprint to any obstacle and to the bounds.
inline Result<double> min_clearance(const Scene& scene, const Pose& pose) {
  if (pose_in_collision(scene, pose, 0.0)) {
    return Result<double>(Errc::in_collision, "pose collides");
  }
  const Polygon fp = footprint_at(scene, pose);
  double best = std::numeric_limits<double>::infinity();
  for (const Point& v : fp.vertices()) {
    best = std::min(best, scene.bounds.interior_distance(v));
  }
  for (const Polygon& obs : scene.obstacles) {
    best = std::min(best, polygon_distance(fp, obs));
  }
  return best;
}

}  // namespace carplan
