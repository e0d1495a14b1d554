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

#include <cmath>
#include <optional>
#include <vector>

#include "carplan/path.hpp"

namespace carplan {

struct ConnectConfig {
  double min_turn_radius = 1.0;
  bool allow_reverse = false;
  /// Reject chains longer than this; unset means 4x the endpoint distance.
  std::optional<double> max_connect_length{};
};

namespace detail {

/// Corner arc whose traversal starts at tangent point p1 moving along the
/// unit travel direction w1 and turns by psi with rotation sign sigma.
inline Arc corner_arc(Point w1, Point p1, double psi, double sigma,
                      double radius) {
  const Point n = sigma > 0.0 ? left_normal(w1) : -1.0 * left_normal(w1);
  const Point center = p1 + radius * n;
  const double start_angle = std::atan2(p1.y - center.y, p1.x - center.x);
  return Arc{center, radius, start_angle, sigma * psi};
}

struct ConnectCandidate {
  std::vector<MotionPrimitive> primitives;
  double length = 0.0;
};

}  // namespace detail

/**
 * Connect two car poses with a curvature-bounded primitive chain.
 *
 * The construction intersects the two heading lines and joins them with a
 * single arc tangent to both, preceded/followed by straight segments that
 * absorb the slack on the longer side. With allow_reverse, three mirrored
 * variants (reverse-then-forward, forward-then-reverse, reverse-only) are
 * tried as well and the shortest feasible chain wins.
 *
 * Identical poses yield an empty chain. The resulting chain folded from a
 * ends at b within kGeomEps.
 */
inline Result<std::vector<MotionPrimitive>> connect_poses(
    const Pose& a, const Pose& b, const ConnectConfig& cfg) {
  using Chain = std::vector<MotionPrimitive>;
  if (poses_close(a, b, kGeomEps, kGeomEps)) return Chain{};

  const double dist_ab = distance(a.position, b.position);
  const double max_len = cfg.max_connect_length.value_or(4.0 * dist_ab);
  const Point ua = a.direction();
  const Point ub = b.direction();
  const double cr = cross(ua, ub);
  const double dt = dot(ua, ub);

  // Parallel heading lines: only the aligned-collinear case is connectable.
  if (std::abs(cr) < kGeomEps) {
    const Point delta = b.position - a.position;
    const double along = dot(delta, ua);
    const double off = cross(ua, delta);
    const bool on_line = std::abs(off) <= kGeomEps * std::max(1.0, dist_ab);
    if (dt > 0.0 && on_line) {
      if (along > 0.0) {
        Chain chain{MotionPrimitive::straight(
            Segment{a.position, b.position}, Direction::forward)};
        if (along > max_len) {
          return Result<Chain>(Errc::too_long, "straight connection too long");
        }
        return chain;
      }
      if (cfg.allow_reverse) {
        if (-along > max_len) {
          return Result<Chain>(Errc::too_long, "straight connection too long");
        }
        return Chain{MotionPrimitive::straight(
            Segment{a.position, b.position}, Direction::reverse)};
      }
      return Result<Chain>(Errc::no_forward_connection,
                           "target behind start, reverse disabled");
    }
    return Result<Chain>(Errc::parallel_unaligned,
                         "parallel headings, not on a shared ray");
  }

  const auto isect = heading_intersection(a, b);
  if (!isect.ok()) return Result<Chain>(isect.error());
  const Point corner = isect.value().point;
  const double da = isect.value().dist_a;
  const double db = isect.value().dist_b;
  const double psi = std::atan2(std::abs(cr), dt);  // turn angle, in (0, pi)
  const double sigma = cr > 0.0 ? 1.0 : -1.0;
  const double tan_half = std::tan(0.5 * psi);

  bool radius_failed = false;
  bool too_long = false;
  std::optional<detail::ConnectCandidate> best;

  const auto consider = [&](detail::ConnectCandidate cand) {
    if (cand.length > max_len) {
      too_long = true;
      return;
    }
    if (!best || cand.length < best->length) best = std::move(cand);
  };
  const auto radius_for = [&](double t) -> std::optional<double> {
    const double r = t / tan_half;
    if (r < cfg.min_turn_radius) {
      radius_failed = true;
      return std::nullopt;
    }
    return r;
  };

  // Forward: straight (da - t), arc, straight (db - t).
  if (da > kGeomEps && db > kGeomEps) {
    const double t = std::min(da, db);
    if (const auto r = radius_for(t)) {
      detail::ConnectCandidate cand;
      const Point p1 = corner - t * ua;
      if (da - t > kGeomEps) {
        cand.primitives.push_back(MotionPrimitive::straight(
            Segment{a.position, p1}, Direction::forward));
      }
      cand.primitives.push_back(MotionPrimitive::arc(
          detail::corner_arc(ua, p1, psi, sigma, *r), Direction::forward));
      if (db - t > kGeomEps) {
        cand.primitives.push_back(MotionPrimitive::straight(
            Segment{corner + t * ub, b.position}, Direction::forward));
      }
      cand.length = (da - t) + *r * psi + (db - t);
      consider(std::move(cand));
    }
  }

  if (cfg.allow_reverse) {
    // Reverse-then-forward: back up along the start line, then drive a
    // forward arc that lands exactly on b (tangent length t = db).
    if (db > kGeomEps && db - da > kGeomEps) {
      const double t = db;
      if (const auto r = radius_for(t)) {
        const Point p1 = corner - t * ua;
        detail::ConnectCandidate cand;
        cand.primitives.push_back(MotionPrimitive::straight(
            Segment{a.position, p1}, Direction::reverse));
        cand.primitives.push_back(MotionPrimitive::arc(
            detail::corner_arc(ua, p1, psi, sigma, *r), Direction::forward));
        cand.length = (t - da) + *r * psi;
        consider(std::move(cand));
      }
    }
    // Forward-then-reverse: forward arc from a past the corner, then back
    // up into b (tangent length t = da).
    if (da > kGeomEps && da - db > kGeomEps) {
      const double t = da;
      if (const auto r = radius_for(t)) {
        detail::ConnectCandidate cand;
        cand.primitives.push_back(MotionPrimitive::arc(
            detail::corner_arc(ua, a.position, psi, sigma, *r),
            Direction::forward));
        cand.primitives.push_back(MotionPrimitive::straight(
            Segment{corner + t * ub, b.position}, Direction::reverse));
        cand.length = *r * psi + (t - db);
        consider(std::move(cand));
      }
    }
    // Reverse-only: the forward construction driven backwards.
    if (da < -kGeomEps && db < -kGeomEps) {
      const double t = std::min(-da, -db);
      if (const auto r = radius_for(t)) {
        const Point w1 = -1.0 * ua;
        const Point p1 = corner - t * w1;
        detail::ConnectCandidate cand;
        if (-da - t > kGeomEps) {
          cand.primitives.push_back(MotionPrimitive::straight(
              Segment{a.position, p1}, Direction::reverse));
        }
        cand.primitives.push_back(MotionPrimitive::arc(
            detail::corner_arc(w1, p1, psi, sigma, *r), Direction::reverse));
        if (-db - t > kGeomEps) {
          cand.primitives.push_back(MotionPrimitive::straight(
              Segment{corner - t * ub, b.position}, Direction::reverse));
        }
        cand.length = (-da - t) + *r * psi + (-db - t);
        consider(std::move(cand));
      }
    }
  }

  if (best) return std::move(best->primitives);
  if (too_long) {
    return Result<Chain>(Errc::too_long, "all feasible chains exceed limit");
  }
  if (!cfg.allow_reverse && (da <= kGeomEps || db <= kGeomEps)) {
    return Result<Chain>(Errc::no_forward_connection,
                         "intersection not ahead of both poses");
  }
  if (radius_failed) {
    return Result<Chain>(Errc::turn_too_sharp,
                         "required radius below min_turn_radius");
  }
  return Result<Chain>(Errc::no_forward_connection,
                       "no admissible construction");
}

}  // namespace carplan
