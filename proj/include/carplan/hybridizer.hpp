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
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "carplan/graph_search.hpp"
#include "carplan/local_planner.hpp"
#include "carplan/quality.hpp"

namespace carplan {

/// Node of the hybridization graph: a merged primitive-endpoint pose. The
/// origin set records which input paths pass through it; start and goal
/// belong to every path.
struct HNode {
  Pose pose{};
  std::vector<int> origin_paths;  ///< sorted, unique input path indices
  bool is_start = false;
  bool is_goal = false;
};

enum class HEdgeKind { original, bridge };

struct HEdge {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  std::vector<MotionPrimitive> primitives;
  CostBreakdown cost;
  HEdgeKind kind = HEdgeKind::original;
};

struct BridgeStats {
  std::size_t attempted = 0;
  std::size_t geometric_failures = 0;
  std::size_t collision_failures = 0;
  std::size_t inserted = 0;
};

struct HGraph {
  std::vector<HNode> nodes;
  std::vector<HEdge> edges;
  std::uint32_t start = 0;
  std::uint32_t goal = 0;
  BridgeStats bridge_stats;
};

struct HybridizeConfig {
  int k = 6;               ///< planner runs to fuse
  int bridge_fanout = 5;   ///< nearest cross-path candidates per node
  double bridge_radius = 0.0;  ///< <= 0: use 0.25 * scene bounds diagonal
  std::uint64_t seed_base = 0;

  double resolved_bridge_radius(const Scene& scene) const {
    return bridge_radius > 0.0 ? bridge_radius
                               : 0.25 * scene.bounds.diagonal();
  }
};

namespace detail {

/// Node pool that merges poses within the given tolerances. Lookup is
/// linear over a position-bucketed candidate set; graph sizes here are
/// small (tens to low hundreds of nodes).
class PoseMerger {
 public:
  PoseMerger(double pos_tol, double heading_tol)
      : pos_tol_(pos_tol), heading_tol_(heading_tol) {}

  std::uint32_t intern(std::vector<HNode>& nodes, const Pose& pose) {
    for (std::uint32_t i = 0; i < nodes.size(); ++i) {
      if (poses_close(nodes[i].pose, pose, pos_tol_, heading_tol_)) return i;
    }
    nodes.push_back(HNode{pose, {}, false, false});
    return static_cast<std::uint32_t>(nodes.size() - 1);
  }

 private:
  double pos_tol_;
  double heading_tol_;
};

inline void add_origin(HNode& node, int path_index) {
  auto& v = node.origin_paths;
  auto it = std::lower_bound(v.begin(), v.end(), path_index);
  if (it == v.end() || *it != path_index) v.insert(it, path_index);
}

inline bool origins_disjoint(const HNode& a, const HNode& b) {
  auto i = a.origin_paths.begin();
  auto j = b.origin_paths.begin();
  while (i != a.origin_paths.end() && j != b.origin_paths.end()) {
    if (*i == *j) return false;
    if (*i < *j) ++i; else ++j;
  }
  return true;
}

inline bool primitives_identical(const std::vector<MotionPrimitive>& a,
                                 const std::vector<MotionPrimitive>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].direction() != b[i].direction() || a[i].is_arc() != b[i].is_arc())
      return false;
    if (a[i].is_arc()) {
      const Arc& x = a[i].arc();
      const Arc& y = b[i].arc();
      if (!(x.center == y.center) || x.radius != y.radius ||
          x.start_angle != y.start_angle || x.sweep != y.sweep)
        return false;
    } else {
      const Segment& x = a[i].segment();
      const Segment& y = b[i].segment();
      if (!(x.start == y.start) || !(x.end == y.end)) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Fuse the input paths into one directed graph: merged endpoint nodes,
/// one original edge per primitive, plus collision-checked local-planner
/// bridges between nodes of disjoint path origin. Deterministic.
inline Result<HGraph> build_hgraph(const std::vector<CarPath>& paths,
                                   const Scene& scene, const QualitySpec& spec,
                                   const ConnectConfig& cc,
                                   const HybridizeConfig& cfg,
                                   const SweepCheckConfig& sweep) {
  if (paths.empty()) {
    return Result<HGraph>(Errc::invalid_argument, "no input paths");
  }
  for (std::size_t i = 1; i < paths.size(); ++i) {
    if (!poses_close(paths[i].start, paths[0].start, kPoseMergeEps,
                     kPoseMergeEps)) {
      return Result<HGraph>(Errc::mismatched_endpoints,
                            "input paths start at different poses");
    }
  }

  HGraph g;
  detail::PoseMerger merger(kPoseMergeEps, kPoseMergeEps);
  g.start = merger.intern(g.nodes, paths[0].start);
  g.nodes[g.start].is_start = true;

  const auto edge_cost = [&](const Pose& from,
                             const std::vector<MotionPrimitive>& prims)
      -> Result<CostBreakdown> {
    return path_cost(CarPath{from, prims}, scene, spec);
  };

  // Embed every path as a node/edge chain; duplicate edges (same endpoints,
  // identical geometry) collapse so identical inputs add nothing new.
  std::vector<std::uint32_t> path_end_nodes;
  for (std::size_t p = 0; p < paths.size(); ++p) {
    std::uint32_t cur = g.start;
    detail::add_origin(g.nodes[cur], static_cast<int>(p));
    Pose cur_pose = paths[p].start;
    for (const MotionPrimitive& prim : paths[p].primitives) {
      const Pose next_pose = prim.end_pose();
      const std::uint32_t next = merger.intern(g.nodes, next_pose);
      detail::add_origin(g.nodes[next], static_cast<int>(p));
      bool duplicate = false;
      for (const HEdge& e : g.edges) {
        if (e.from == cur && e.to == next && e.kind == HEdgeKind::original &&
            detail::primitives_identical(e.primitives, {prim})) {
          duplicate = true;
          break;
        }
      }
      if (!duplicate) {
        auto cost = edge_cost(cur_pose, {prim});
        if (!cost.ok()) return Result<HGraph>(cost.error());
        g.edges.push_back(HEdge{cur, next, {prim}, cost.value(),
                                HEdgeKind::original});
      }
      cur = next;
      cur_pose = next_pose;
    }
    path_end_nodes.push_back(cur);
  }
  g.goal = path_end_nodes[0];
  for (std::uint32_t end : path_end_nodes) {
    if (end != g.goal) {
      return Result<HGraph>(Errc::mismatched_endpoints,
                            "input paths end at different poses");
    }
  }
  g.nodes[g.goal].is_goal = true;

  // Bridge densification: for each node, try the local planner toward its
  // nearest cross-path neighbours inside the bridge radius. Candidates are
  // ordered by (distance^2, node index) so construction is deterministic.
  const double radius = cfg.resolved_bridge_radius(scene);
  const double radius_sq = radius * radius;
  for (std::uint32_t u = 0; u < g.nodes.size(); ++u) {
    std::vector<std::pair<double, std::uint32_t>> cands;
    for (std::uint32_t v = 0; v < g.nodes.size(); ++v) {
      if (v == u) continue;
      if (!detail::origins_disjoint(g.nodes[u], g.nodes[v])) continue;
      const double d2 =
          distance_sq(g.nodes[u].pose.position, g.nodes[v].pose.position);
      if (d2 <= radius_sq) cands.push_back({d2, v});
    }
    std::sort(cands.begin(), cands.end());
    const std::size_t fanout =
        std::min<std::size_t>(cands.size(),
                              static_cast<std::size_t>(
                                  std::max(0, cfg.bridge_fanout)));
    for (std::size_t c = 0; c < fanout; ++c) {
      const std::uint32_t v = cands[c].second;
      ++g.bridge_stats.attempted;
      auto chain = connect_poses(g.nodes[u].pose, g.nodes[v].pose, cc);
      if (!chain.ok()) {
        ++g.bridge_stats.geometric_failures;
        continue;
      }
      bool collides = false;
      for (const MotionPrimitive& prim : chain.value()) {
        if (primitive_in_collision(scene, prim, sweep)) {
          collides = true;
          break;
        }
      }
      if (collides) {
        ++g.bridge_stats.collision_failures;
        continue;
      }
      auto cost = edge_cost(g.nodes[u].pose, chain.value());
      if (!cost.ok()) {
        ++g.bridge_stats.collision_failures;
        continue;
      }
      g.edges.push_back(HEdge{u, v, std::move(chain.value()), cost.value(),
                              HEdgeKind::bridge});
      ++g.bridge_stats.inserted;
    }
  }
  return g;
}

/// Plain Dijkstra over stored edge costs (cost.total). Ties prefer fewer
/// edges, then the lexicographically smaller node-index sequence. Tie
/// improvements re-push the node so the better parent propagates; labels
/// strictly decrease in (cost, hops, sequence) order, so this terminates.
inline Result<std::vector<HEdge>> dijkstra(const HGraph& g) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const std::size_t n = g.nodes.size();
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (std::uint32_t e = 0; e < g.edges.size(); ++e) {
    adj[g.edges[e].from].push_back(e);
  }

  std::vector<double> dist(n, kInf);
  std::vector<std::uint32_t> hops(n, 0);
  std::vector<std::int64_t> parent_edge(n, -1);

  const auto sequence_of = [&](std::uint32_t node) {
    std::vector<std::uint32_t> seq;
    std::uint32_t cur = node;
    seq.push_back(cur);
    while (parent_edge[cur] >= 0) {
      cur = g.edges[static_cast<std::size_t>(parent_edge[cur])].from;
      seq.push_back(cur);
    }
    std::reverse(seq.begin(), seq.end());
    return seq;
  };

  using QItem = std::tuple<double, std::uint32_t, std::uint32_t>;
  std::priority_queue<QItem, std::vector<QItem>, std::greater<QItem>> queue;
  dist[g.start] = 0.0;
  queue.emplace(0.0, 0, g.start);
  while (!queue.empty()) {
    const auto [d, h, u] = queue.top();
    queue.pop();
    if (d != dist[u] || h != hops[u]) continue;  // stale entry
    for (std::uint32_t e : adj[u]) {
      const HEdge& edge = g.edges[e];
      const std::uint32_t v = edge.to;
      const double nd = d + edge.cost.total;
      const std::uint32_t nh = h + 1;
      bool better = false;
      if (nd < dist[v] || (nd == dist[v] && nh < hops[v])) {
        better = true;
      } else if (nd == dist[v] && nh == hops[v] &&
                 parent_edge[v] != static_cast<std::int64_t>(e)) {
        // Equal cost and length: compare the full node sequences. The
        // sequences have equal length, so the order is append-stable.
        std::vector<std::uint32_t> challenger = sequence_of(u);
        challenger.push_back(v);
        better = challenger < sequence_of(v);
      }
      if (better) {
        dist[v] = nd;
        hops[v] = nh;
        parent_edge[v] = static_cast<std::int64_t>(e);
        queue.emplace(nd, nh, v);
      }
    }
  }

  if (dist[g.goal] == kInf) {
    return Result<std::vector<HEdge>>(Errc::no_path, "goal unreachable");
  }
  std::vector<HEdge> out;
  std::uint32_t cur = g.goal;
  while (parent_edge[cur] >= 0) {
    const HEdge& e = g.edges[static_cast<std::size_t>(parent_edge[cur])];
    out.push_back(e);
    cur = e.from;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

struct RunReport {
  std::uint64_t seed = 0;
  bool ok = false;
  CostBreakdown cost;
  double wall_ms = 0.0;
  std::string error;
};

struct HybridizeReport {
  std::vector<RunReport> runs;
  BridgeStats bridges;
  CostBreakdown hybrid_cost;
  double wall_ms_total = 0.0;
  std::size_t graph_nodes = 0;
  std::size_t graph_edges = 0;
};

struct HybridizeResult {
  CarPath path;
  HybridizeReport report;
  HGraph graph;
  std::vector<CarPath> input_paths;  ///< the successful runs, in seed order
};

using PlannerFn = std::function<Result<CarPath>(std::uint64_t seed)>;

/// Run the planner k times (seeds seed_base .. seed_base+k-1), fuse the
/// successful paths into the H-graph and extract the best start-goal path.
/// The extraction searches over (node, gear) states so junction gear-flip
/// penalties are priced exactly; the summed edge weights equal the
/// standalone cost of the assembled path, which makes the hybrid never
/// worse than any input under any non-negative weight spec.
inline Result<HybridizeResult> hybridize(const PlannerFn& planner,
                                         const Scene& scene, const Pose& start,
                                         const Pose& goal,
                                         const QualitySpec& spec,
                                         const HybridizeConfig& cfg,
                                         const ConnectConfig& cc,
                                         const SweepCheckConfig& sweep) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto ms_since = [](std::chrono::steady_clock::time_point from) {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - from)
        .count();
  };

  HybridizeResult out;
  std::vector<CarPath> inputs;
  for (int i = 0; i < std::max(1, cfg.k); ++i) {
    const std::uint64_t seed = cfg.seed_base + static_cast<std::uint64_t>(i);
    RunReport run;
    run.seed = seed;
    const auto run_t0 = std::chrono::steady_clock::now();
    auto res = planner(seed);
    run.wall_ms = ms_since(run_t0);
    if (res.ok()) {
      auto cost = path_cost(res.value(), scene, spec);
      if (cost.ok()) {
        run.ok = true;
        run.cost = cost.value();
        inputs.push_back(std::move(res.value()));
      } else {
        run.error = cost.error().describe();
      }
    } else {
      run.error = res.error().describe();
    }
    out.report.runs.push_back(std::move(run));
  }
  if (inputs.empty()) {
    return Result<HybridizeResult>(Errc::all_runs_failed,
                                   "every planner run failed");
  }

  auto graph = build_hgraph(inputs, scene, spec, cc, cfg, sweep);
  if (!graph.ok()) return Result<HybridizeResult>(graph.error());
  out.graph = std::move(graph.value());
  if (!poses_close(out.graph.nodes[out.graph.start].pose, start, kPoseMergeEps,
                   kPoseMergeEps) ||
      !poses_close(out.graph.nodes[out.graph.goal].pose, goal, kPoseMergeEps,
                   kPoseMergeEps)) {
    return Result<HybridizeResult>(
        Errc::mismatched_endpoints,
        "planner outputs do not match the requested start/goal");
  }
  out.report.bridges = out.graph.bridge_stats;
  out.report.graph_nodes = out.graph.nodes.size();
  out.report.graph_edges = out.graph.edges.size();

  // Gear-augmented extraction: edge weights exclude junction corrections,
  // the search adds them, so the optimum is exact under the full spec.
  std::vector<std::vector<detail::SearchEdge>> adj(out.graph.nodes.size());
  for (std::uint32_t e = 0; e < out.graph.edges.size(); ++e) {
    const HEdge& edge = out.graph.edges[e];
    detail::SearchEdge se;
    se.to = edge.to;
    se.id = e;
    se.internal_cost = detail::edge_internal_cost(
        edge.primitives, spec.w_length, spec.w_smoothness, spec.w_clearance,
        edge.cost.clearance_cost, spec.w_reversals);
    if (!edge.primitives.empty()) {
      se.first = detail::gear_of(edge.primitives.front().direction());
      se.last = detail::gear_of(edge.primitives.back().direction());
    }
    adj[edge.from].push_back(se);
  }
  detail::SearchResult found = detail::gear_dijkstra(
      out.graph.nodes.size(), adj, out.graph.start, out.graph.goal,
      spec.w_smoothness * kPi + spec.w_reversals, spec.w_reversals);
  if (!found.found) {
    return Result<HybridizeResult>(Errc::no_path,
                                   "hybrid graph disconnected");
  }

  out.path.start = start;
  for (std::uint32_t e : found.edge_ids) {
    const auto& prims = out.graph.edges[e].primitives;
    out.path.primitives.insert(out.path.primitives.end(), prims.begin(),
                               prims.end());
  }
  auto cost = path_cost(out.path, scene, spec);
  if (!cost.ok()) return Result<HybridizeResult>(cost.error());
  out.report.hybrid_cost = cost.value();
  out.report.wall_ms_total = ms_since(t0);
  out.input_paths = std::move(inputs);
  return out;
}

}  // namespace carplan
