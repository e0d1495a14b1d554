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

#include <string>
#include <variant>
#include <vector>

#include "carplan/geometry.hpp"

namespace carplan {

/// Gear of a motion primitive. A reverse primitive traverses its geometry
/// with the car facing opposite to the direction of travel.
enum class Direction { forward, reverse };

/// Position tolerance below which two poses are merged when fusing paths.
inline constexpr double kPoseMergeEps = 1e-6;

/// Default junction tolerance when folding primitive chains. Looser than
/// kGeomEps so that chains assembled from pose-merged graph nodes still
/// fold cleanly.
inline constexpr double kJunctionTol = 1e-6;

/// A straight segment or circular arc together with a drive direction.
/// The geometry is always traversed start-to-end; the direction flag only
/// decides which way the car faces while doing so.
class MotionPrimitive {
 public:
  static MotionPrimitive straight(Segment seg,
                                  Direction dir = Direction::forward) {
    return MotionPrimitive(seg, dir);
  }
  static MotionPrimitive arc(Arc a, Direction dir = Direction::forward) {
    return MotionPrimitive(a, dir);
  }

  bool is_arc() const { return std::holds_alternative<Arc>(geometry_); }
  bool is_straight() const { return !is_arc(); }
  const Arc& arc() const { return std::get<Arc>(geometry_); }
  const Segment& segment() const { return std::get<Segment>(geometry_); }
  Direction direction() const { return direction_; }
  bool reverse() const { return direction_ == Direction::reverse; }

  double length() const {
    return is_arc() ? arc().length() : segment().length();
  }

  /// Car pose at arc-length s along the primitive, s in [0, length].
  /// The heading is the car's facing, i.e. flipped for reverse primitives.
  Pose pose_at(double s) const {
    if (is_arc()) {
      const Arc& a = arc();
      const double angle = a.angle_at(s);
      double heading = a.tangent_at_angle(angle);
      if (reverse()) heading += kPi;
      return Pose{a.point_at_angle(angle), heading};
    }
    const Segment& seg = segment();
    const Point dir = seg.direction();
    const double heading =
        reverse() ? std::atan2(-dir.y, -dir.x) : std::atan2(dir.y, dir.x);
    return Pose{seg.point_at(s), heading};
  }

  Pose start_pose() const { return pose_at(0.0); }
  Pose end_pose() const { return pose_at(length()); }

 private:
  MotionPrimitive(Segment seg, Direction dir)
      : geometry_(seg), direction_(dir) {}
  MotionPrimitive(Arc a, Direction dir) : geometry_(a), direction_(dir) {}

  std::variant<Segment, Arc> geometry_;
  Direction direction_;
};

/// A car path: a start pose plus a G1-continuous chain of primitives.
struct CarPath {
  Pose start{};
  std::vector<MotionPrimitive> primitives;

  double length() const {
    double total = 0.0;
    for (const auto& p : primitives) total += p.length();
    return total;
  }
};

/// Fold the primitive chain from path.start and return the end pose.
/// Checks junction continuity (position and facing) as it goes.
inline Result<Pose> path_end_pose(const CarPath& path,
                                  double junction_tol = kJunctionTol) {
  Pose cur = path.start;
  for (std::size_t i = 0; i < path.primitives.size(); ++i) {
    const Pose begin = path.primitives[i].start_pose();
    if (!poses_close(begin, cur, junction_tol, junction_tol)) {
      return Result<Pose>(Errc::discontinuous_path,
                          "junction mismatch before primitive " +
                              std::to_string(i));
    }
    cur = path.primitives[i].end_pose();
  }
  return cur;
}

/// Make a straight primitive that starts at the given car pose and covers
/// the given distance (forward moves along the heading, reverse against it).
inline MotionPrimitive straight_from_pose(const Pose& pose, double dist,
                                          Direction dir) {
  const Point travel = dir == Direction::forward
                           ? pose.direction()
                           : -1.0 * pose.direction();
  return MotionPrimitive::straight(
      Segment{pose.position, pose.position + dist * travel}, dir);
}

}  // namespace carplan
