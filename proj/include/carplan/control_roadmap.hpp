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
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "carplan/rng.hpp"
#include "carplan/scene.hpp"
#include "carplan/spatial_index.hpp"

namespace carplan {

struct PrmConfig {
  int num_samples = 500;
  int num_neighbors = 8;
  std::uint64_t seed = 0;
  bool presample_rejection = true;
};

/// Position-only probabilistic roadmap: free-space connectivity with no
/// non-holonomic constraints and no edge collision checks (those are
/// deferred to query time).
struct ControlRoadmap {
  std::vector<Point> nodes;
  std::vector<std::pair<int, int>> edges;     ///< undirected, first < second
  std::vector<std::vector<int>> adjacency;    ///< sorted neighbor lists
  PointGridIndex index;                       ///< kNN index over nodes
};

/// Sample num_samples points uniformly inside the bounds and connect each
/// to its num_neighbors nearest nodes (edge set symmetrized). With
/// presample_rejection, points strictly inside obstacles are resampled.
/// Deterministic for a fixed seed.
inline Result<ControlRoadmap> build_control_roadmap(const Scene& scene,
                                                    const PrmConfig& cfg) {
  if (cfg.num_samples < 2 || cfg.num_neighbors < 1) {
    return Result<ControlRoadmap>(
        Errc::invalid_argument, "need num_samples >= 2 and num_neighbors >= 1");
  }
  ControlRoadmap rm;
  rm.nodes.reserve(static_cast<std::size_t>(cfg.num_samples));
  Rng rng(cfg.seed);
  const long max_attempts = 1000L * cfg.num_samples;
  long attempts = 0;
  while (rm.nodes.size() < static_cast<std::size_t>(cfg.num_samples)) {
    if (attempts++ >= max_attempts) {
      return Result<ControlRoadmap>(Errc::sampling_exhausted,
                                    "rejection sampling failed " +
                                        std::to_string(max_attempts) +
                                        " times");
    }
    const Point p{rng.uniform(scene.bounds.xmin, scene.bounds.xmax),
                  rng.uniform(scene.bounds.ymin, scene.bounds.ymax)};
    if (cfg.presample_rejection) {
      bool inside = false;
      for (const Polygon& obs : scene.obstacles) {
        if (obs.contains(p)) {
          inside = true;
          break;
        }
      }
      if (inside) continue;
    }
    rm.nodes.push_back(p);
  }

  rm.index = PointGridIndex(rm.nodes);
  const std::size_t k = static_cast<std::size_t>(cfg.num_neighbors);
  std::set<std::pair<int, int>> edge_set;
  for (int i = 0; i < cfg.num_samples; ++i) {
    // k+1 nearest includes the node itself (distance 0, lowest tie index).
    std::vector<int> nn = rm.index.k_nearest(rm.nodes[static_cast<std::size_t>(i)], k + 1);
    for (int j : nn) {
      if (j == i) continue;
      edge_set.insert({std::min(i, j), std::max(i, j)});
    }
  }
  rm.edges.assign(edge_set.begin(), edge_set.end());
  rm.adjacency.assign(rm.nodes.size(), {});
  for (const auto& [a, b] : rm.edges) {
    rm.adjacency[static_cast<std::size_t>(a)].push_back(b);
    rm.adjacency[static_cast<std::size_t>(b)].push_back(a);
  }
  for (auto& nbrs : rm.adjacency) std::sort(nbrs.begin(), nbrs.end());
  return rm;
}

/// The min(m, |nodes|) nearest nodes to p, ascending by distance, ties
/// broken by the lower index.
inline std::vector<int> nearest_nodes(const ControlRoadmap& rm, Point p,
                                      int m) {
  if (m <= 0 || rm.nodes.empty()) return {};
  return rm.index.k_nearest(p, static_cast<std::size_t>(m));
}

}  // namespace carplan
