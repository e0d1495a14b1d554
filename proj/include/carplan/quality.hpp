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
#include <limits>

#include "carplan/scene.hpp"

namespace carplan {

/// Weighted combination of the four path quality criteria. clearance_step
/// <= 0 means "use the scene's default collision step" (0.1 * turn radius).
struct QualitySpec {
  double w_length = 1.0;
  double w_smoothness = 0.0;
  double w_clearance = 0.0;
  double w_reversals = 0.0;
  double clearance_floor = 1e-3;  ///< lower clamp on sampled clearance
  double clearance_step = 0.0;    ///< sampling interval along the path

  double resolved_clearance_step(const Scene& scene) const {
    return clearance_step > 0.0 ? clearance_step
                                : 0.1 * scene.car.min_turn_radius;
  }

  static QualitySpec length_only() { return QualitySpec{}; }
};

struct CostBreakdown {
  double length = 0.0;
  double smoothness = 0.0;
  double clearance_cost = 0.0;
  int reversal_count = 0;
  double min_clearance = 0.0;
  double total = 0.0;
};

/// Sum of primitive lengths; reverse primitives count their full length.
inline double path_length(const CarPath& path) { return path.length(); }

/// Total turning (sum of |sweep| over arcs) plus pi per gear change between
/// consecutive primitives. Straight-only forward paths score 0.
inline double path_smoothness(const CarPath& path) {
  double total = 0.0;
  for (std::size_t i = 0; i < path.primitives.size(); ++i) {
    const MotionPrimitive& p = path.primitives[i];
    if (p.is_arc()) total += std::abs(p.arc().sweep);
    if (i > 0 && p.direction() != path.primitives[i - 1].direction()) {
      total += kPi;
    }
  }
  return total;
}

/// Gear changes between consecutive primitives, plus one if the path leaves
/// its start in reverse.
inline int reversal_count(const CarPath& path) {
  if (path.primitives.empty()) return 0;
  int count = path.primitives.front().reverse() ? 1 : 0;
  for (std::size_t i = 1; i < path.primitives.size(); ++i) {
    if (path.primitives[i].direction() != path.primitives[i - 1].direction()) {
      ++count;
    }
  }
  return count;
}

struct ClearanceResult {
  double cost = 0.0;
  double min_clearance = std::numeric_limits<double>::infinity();
};

/// Integral of inverse clearance along the path, sampled trapezoidally at
/// spacing <= the QualitySpec clearance step. The sampled minimum clearance is
/// reported alongside. Sampling at the same spacing on each primitive keeps
/// the cost additive under path concatenation.
inline Result<ClearanceResult> path_clearance_cost(const CarPath& path,
                                                   const Scene& scene,
                                                   const QualitySpec& spec) {
  const double step = spec.resolved_clearance_step(scene);
  const double floor = spec.clearance_floor;
  ClearanceResult res;

  const auto sample = [&](const Pose& pose) -> Result<double> {
    auto c = min_clearance(scene, pose);
    if (!c.ok()) return c;
    res.min_clearance = std::min(res.min_clearance, c.value());
    return std::max(c.value(), floor);
  };

  if (path.primitives.empty()) {
    auto c = sample(path.start);
    if (!c.ok()) return Result<ClearanceResult>(c.error());
    return res;
  }
  for (const MotionPrimitive& prim : path.primitives) {
    const double len = prim.length();
    const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
    const double spacing = len / static_cast<double>(n);
    for (int i = 0; i <= n; ++i) {
      auto c = sample(prim.pose_at(spacing * static_cast<double>(i)));
      if (!c.ok()) return Result<ClearanceResult>(c.error());
      const double w = (i == 0 || i == n) ? 0.5 : 1.0;
      res.cost += w * spacing / c.value();
    }
  }
  return res;
}

/// Full weighted cost. Clearance is only evaluated when its weight is
/// positive; otherwise both clearance fields carry the -1 sentinel.
inline Result<CostBreakdown> path_cost(const CarPath& path, const Scene& scene,
                                       const QualitySpec& spec) {
  CostBreakdown out;
  out.length = path_length(path);
  out.smoothness = path_smoothness(path);
  out.reversal_count = reversal_count(path);
  if (spec.w_clearance > 0.0) {
    auto clearance = path_clearance_cost(path, scene, spec);
    if (!clearance.ok()) return Result<CostBreakdown>(clearance.error());
    out.clearance_cost = clearance.value().cost;
    out.min_clearance = clearance.value().min_clearance;
  } else {
    out.clearance_cost = -1.0;
    out.min_clearance = -1.0;
  }
  out.total = spec.w_length * out.length + spec.w_smoothness * out.smoothness +
              spec.w_reversals * static_cast<double>(out.reversal_count);
  if (spec.w_clearance > 0.0) out.total += spec.w_clearance * out.clearance_cost;
  return out;
}

}  // namespace carplan
