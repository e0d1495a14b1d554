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
#include <cstdint>
#include <limits>
#include <queue>
#include <tuple>
#include <vector>

#include "carplan/path.hpp"

namespace carplan::detail {

/// Gear state during graph search: direction of the last primitive driven,
/// or none before the first primitive (no gear engaged yet).
enum class Gear : std::uint8_t { none = 0, forward = 1, reverse = 2 };

inline Gear gear_of(Direction d) {
  return d == Direction::forward ? Gear::forward : Gear::reverse;
}

/// One directed edge of the search graph. internal_cost covers everything
/// the edge's own primitive chain incurs; the junction penalty for engaging
/// a different gear than the arrival gear is added by the search itself.
/// first == none marks an empty chain (zero-cost identity edge) that passes
/// the arrival gear through unchanged.
struct SearchEdge {
  std::uint32_t to = 0;
  std::uint32_t id = 0;  ///< caller-side edge identifier
  double internal_cost = 0.0;
  Gear first = Gear::none;
  Gear last = Gear::none;
};

struct SearchResult {
  bool found = false;
  double cost = 0.0;
  std::vector<std::uint32_t> edge_ids;  ///< edges along the best path, in order
};

/// Dijkstra over (node, gear) states. Crossing a junction into an edge whose
/// first gear differs from the arrival gear costs flip_penalty extra;
/// engaging reverse as the very first gear costs initial_reverse_penalty.
/// This makes the summed weights equal the standalone cost of the
/// concatenated path. Ties pop lowest (node, gear) first, so results are
/// deterministic.
inline SearchResult gear_dijkstra(
    std::size_t num_nodes, const std::vector<std::vector<SearchEdge>>& adj,
    std::uint32_t start, std::uint32_t goal, double flip_penalty,
    double initial_reverse_penalty) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const std::size_t num_states = 3 * num_nodes;
  const auto state_of = [](std::uint32_t node, Gear g) {
    return 3 * static_cast<std::size_t>(node) + static_cast<std::size_t>(g);
  };

  std::vector<double> dist(num_states, kInf);
  std::vector<std::uint32_t> parent_state(num_states, 0);
  std::vector<std::uint32_t> parent_edge(num_states, 0);
  std::vector<bool> has_parent(num_states, false);
  std::vector<bool> settled(num_states, false);

  using QItem = std::tuple<double, std::uint32_t, std::uint8_t>;
  std::priority_queue<QItem, std::vector<QItem>, std::greater<QItem>> queue;

  const std::size_t start_state = state_of(start, Gear::none);
  dist[start_state] = 0.0;
  queue.emplace(0.0, start, static_cast<std::uint8_t>(Gear::none));

  while (!queue.empty()) {
    const auto [d, node, gear_raw] = queue.top();
    queue.pop();
    const Gear gear = static_cast<Gear>(gear_raw);
    const std::size_t state = state_of(node, gear);
    if (settled[state]) continue;
    settled[state] = true;

    for (const SearchEdge& e : adj[node]) {
      Gear next_gear = gear;
      double extra = 0.0;
      if (e.first != Gear::none) {
        if (gear == Gear::none) {
          if (e.first == Gear::reverse) extra = initial_reverse_penalty;
        } else if (gear != e.first) {
          extra = flip_penalty;
        }
        next_gear = e.last;
      }
      const double nd = d + e.internal_cost + extra;
      const std::size_t ns = state_of(e.to, next_gear);
      if (nd < dist[ns]) {
        dist[ns] = nd;
        parent_state[ns] = static_cast<std::uint32_t>(state);
        parent_edge[ns] = e.id;
        has_parent[ns] = true;
        queue.emplace(nd, e.to, static_cast<std::uint8_t>(next_gear));
      }
    }
  }

  // Best goal state; ties prefer the lower gear index for determinism.
  std::size_t best = num_states;
  for (std::uint8_t g = 0; g < 3; ++g) {
    const std::size_t s = state_of(goal, static_cast<Gear>(g));
    if (dist[s] < kInf && (best == num_states || dist[s] < dist[best])) best = s;
  }
  SearchResult res;
  if (best == num_states) return res;
  res.found = true;
  res.cost = dist[best];
  for (std::size_t s = best; has_parent[s]; s = parent_state[s]) {
    res.edge_ids.push_back(parent_edge[s]);
  }
  std::reverse(res.edge_ids.begin(), res.edge_ids.end());
  return res;
}

/// Cost of an edge's primitive chain excluding junction corrections:
/// weighted length, turning plus internal gear flips, clearance (caller
/// supplies it, or a negative value to skip), internal flips as reversals.
inline double edge_internal_cost(const std::vector<MotionPrimitive>& chain,
                                 double w_length, double w_smoothness,
                                 double w_clearance, double clearance_cost,
                                 double w_reversals) {
  double length = 0.0;
  double turning = 0.0;
  int flips = 0;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    length += chain[i].length();
    if (chain[i].is_arc()) turning += std::abs(chain[i].arc().sweep);
    if (i > 0 && chain[i].direction() != chain[i - 1].direction()) ++flips;
  }
  double cost = w_length * length +
                w_smoothness * (turning + kPi * static_cast<double>(flips)) +
                w_reversals * static_cast<double>(flips);
  if (w_clearance > 0.0 && clearance_cost >= 0.0) {
    cost += w_clearance * clearance_cost;
  }
  return cost;
}

}  // namespace carplan::detail
