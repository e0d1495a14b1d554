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

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "carplan/control_roadmap.hpp"
#include "carplan/graph_search.hpp"
#include "carplan/local_planner.hpp"
#include "carplan/quality.hpp"

namespace carplan {

/// Radius rule for corner fillets: always the car minimum, or the largest
/// radius whose tangent length still fits both half-edges (never below the
/// minimum). fixed_min yields the tightest (shortest) transitions.
enum class RadiusMode { fixed_min, max_fit };

/// Pose at the midpoint of a control edge, traversed from control node
/// `from` toward `to`; the heading points along the travel direction.
struct ApproxNode {
  Pose pose{};
  int control_from = 0;
  int control_to = 0;
};

/// Car-feasible hop between two directed edge midpoints. The chain rounds
/// the shared control node ("corner") and is G1-continuous, all-forward and
/// curvature-bounded. Never collision-checked at build time.
struct Transition {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  int corner = 0;
  std::vector<MotionPrimitive> primitives;
};

struct ApproxRoadmapStats {
  std::size_t corners_attempted = 0;
  std::size_t corners_skipped = 0;
};

struct ApproxRoadmap {
  std::vector<ApproxNode> nodes;
  std::vector<Transition> transitions;
  std::vector<std::vector<std::uint32_t>> adjacency;  ///< outgoing, per node
  ApproxRoadmapStats stats;
  PointGridIndex index;  ///< over node positions (two nodes per midpoint)
};

namespace detail {

/// Fillet to primitive chain; zero-length leads and zero-sweep arcs of the
/// degenerate collinear case are dropped.
inline std::vector<MotionPrimitive> fillet_primitives(const Fillet& f) {
  if (f.degenerate()) {
    // Collinear pass-through: one straight between the midpoints, no arc.
    return {MotionPrimitive::straight(Segment{f.start(), f.end()})};
  }
  std::vector<MotionPrimitive> chain;
  if (f.lead_in.length() > kGeomEps) {
    chain.push_back(MotionPrimitive::straight(f.lead_in));
  }
  chain.push_back(MotionPrimitive::arc(f.arc));
  if (f.lead_out.length() > kGeomEps) {
    chain.push_back(MotionPrimitive::straight(f.lead_out));
  }
  return chain;
}

}  // namespace detail

/// Convert the control roadmap into the approximate roadmap: one node per
/// directed control-edge midpoint, one transition per ordered pair of edges
/// sharing a control node whose corner admits a tangent arc. No collision
/// checks; infeasible corners are skipped and counted.
inline ApproxRoadmap build_approx_roadmap(const ControlRoadmap& rm,
                                          const Scene& scene,
                                          RadiusMode radius_mode) {
  const double rmin = scene.car.min_turn_radius;
  ApproxRoadmap arm;
  arm.nodes.reserve(2 * rm.edges.size());

  // Node 2e is edge e traversed first->second, node 2e+1 the reverse.
  std::vector<std::vector<std::pair<int, std::uint32_t>>> out_by_node(
      rm.nodes.size());  // control node -> (other end, directed node leaving it)
  std::vector<std::vector<std::pair<int, std::uint32_t>>> in_by_node(
      rm.nodes.size());  // control node -> (other end, directed node entering it)
  for (std::size_t e = 0; e < rm.edges.size(); ++e) {
    const auto [i, j] = rm.edges[e];
    const Point pi = rm.nodes[static_cast<std::size_t>(i)];
    const Point pj = rm.nodes[static_cast<std::size_t>(j)];
    const Point mid = midpoint(pi, pj);
    const double ang = std::atan2(pj.y - pi.y, pj.x - pi.x);
    const auto fwd = static_cast<std::uint32_t>(arm.nodes.size());
    arm.nodes.push_back(ApproxNode{Pose{mid, ang}, i, j});
    arm.nodes.push_back(ApproxNode{Pose{mid, ang + kPi}, j, i});
    out_by_node[static_cast<std::size_t>(i)].push_back({j, fwd});
    in_by_node[static_cast<std::size_t>(j)].push_back({i, fwd});
    out_by_node[static_cast<std::size_t>(j)].push_back({i, fwd + 1});
    in_by_node[static_cast<std::size_t>(i)].push_back({j, fwd + 1});
  }

  for (std::size_t c = 0; c < rm.nodes.size(); ++c) {
    const Point corner = rm.nodes[c];
    for (const auto& [prev, node_in] : in_by_node[c]) {
      for (const auto& [next, node_out] : out_by_node[c]) {
        if (prev == next) continue;  // U-turn back along the same edge
        ++arm.stats.corners_attempted;
        const Point p_prev = rm.nodes[static_cast<std::size_t>(prev)];
        const Point p_next = rm.nodes[static_cast<std::size_t>(next)];
        double radius = rmin;
        if (radius_mode == RadiusMode::max_fit) {
          const Point e1 = corner - p_prev;
          const Point e2 = p_next - corner;
          const double denom = e1.norm() * e2.norm();
          const double turn =
              std::atan2(std::abs(cross(e1, e2)) / denom, dot(e1, e2) / denom);
          if (turn > kGeomEps) {
            const double t_max = 0.5 * std::min(e1.norm(), e2.norm());
            radius = std::max(rmin, t_max / std::tan(0.5 * turn));
          }
        }
        auto fillet = fillet_corner(p_prev, corner, p_next, radius);
        if (!fillet.ok()) {
          ++arm.stats.corners_skipped;
          continue;
        }
        arm.transitions.push_back(
            Transition{node_in, node_out, static_cast<int>(c),
                       detail::fillet_primitives(fillet.value())});
      }
    }
  }

  arm.adjacency.assign(arm.nodes.size(), {});
  for (std::size_t t = 0; t < arm.transitions.size(); ++t) {
    arm.adjacency[arm.transitions[t].from].push_back(
        static_cast<std::uint32_t>(t));
  }
  std::vector<Point> positions;
  positions.reserve(arm.nodes.size());
  for (const ApproxNode& n : arm.nodes) positions.push_back(n.pose.position);
  arm.index = PointGridIndex(std::move(positions));
  return arm;
}

/// A start/goal attachment: the roadmap node linked plus the connecting
/// primitive chain (empty when the query pose already is the node pose).
struct AttachLink {
  std::uint32_t node = 0;
  std::vector<MotionPrimitive> primitives;
};

struct AttachResult {
  std::vector<AttachLink> start_links;
  std::vector<AttachLink> goal_links;
};

/// Link start and goal into the roadmap: scan node poses in nearest-first
/// order and collect up to m successful connect_poses links on each side
/// (start outward, goal inward). Candidates very close to the query pose
/// usually sit inside the turning-radius dead zone, so the scan continues
/// past failures until m links succeed or all nodes were tried. Links are
/// purely geometric; collision checking happens lazily at query time.
inline Result<AttachResult> attach_query_poses(
    const ApproxRoadmap& arm, const Scene& scene, const Pose& start,
    const Pose& goal, int m,
    std::optional<ConnectConfig> connect = std::nullopt) {
  ConnectConfig cc = connect.value_or(ConnectConfig{});
  if (!connect.has_value()) cc.min_turn_radius = scene.car.min_turn_radius;

  AttachResult out;
  const auto wanted = static_cast<std::size_t>(std::max(1, m));
  const auto collect = [&](const Pose& query_pose, bool outward,
                           std::vector<AttachLink>& links) {
    for (int idx : arm.index.k_nearest(query_pose.position, arm.nodes.size())) {
      const auto node = static_cast<std::uint32_t>(idx);
      auto chain = outward ? connect_poses(query_pose, arm.nodes[node].pose, cc)
                           : connect_poses(arm.nodes[node].pose, query_pose, cc);
      if (chain.ok()) links.push_back({node, std::move(chain.value())});
      if (links.size() >= wanted) break;
    }
  };
  collect(start, true, out.start_links);
  if (out.start_links.empty()) {
    return Result<AttachResult>(Errc::unreachable,
                                "no local-planner link from start");
  }
  collect(goal, false, out.goal_links);
  if (out.goal_links.empty()) {
    return Result<AttachResult>(Errc::unreachable,
                                "no local-planner link to goal");
  }
  return out;
}

struct QueryStats {
  std::size_t edges_checked = 0;    ///< transitions collision-validated
  std::size_t edges_discarded = 0;  ///< transitions deleted after collision
  std::size_t replans = 0;          ///< extra Dijkstra runs after deletions
  double wall_ms = 0.0;
};

struct QueryResult {
  CarPath path;
  bool validated = false;
  QueryStats stats;
  CostBreakdown cost;
};

/// Query-time tuning knobs not fixed by the roadmap itself.
struct QueryOptions {
  int attach_fanout = 10;
  std::optional<ConnectConfig> connect;  ///< default: scene radius, no reverse
};

namespace detail {

/// Working graph of a single query: roadmap transitions plus start/goal
/// links, weights memoized, deletions local to the query.
class QueryGraph {
 public:
  QueryGraph(const ApproxRoadmap& arm, const Scene& scene,
             const QualitySpec& spec, const AttachResult& links)
      : scene_(scene), spec_(spec) {
    num_nodes_ = arm.nodes.size() + 2;
    start_node_ = static_cast<std::uint32_t>(arm.nodes.size());
    goal_node_ = start_node_ + 1;
    edges_.reserve(arm.transitions.size() + links.start_links.size() +
                   links.goal_links.size());
    for (const Transition& t : arm.transitions) {
      edges_.push_back(Edge{t.from, t.to, &t.primitives});
    }
    for (const AttachLink& l : links.start_links) {
      edges_.push_back(Edge{start_node_, l.node, &l.primitives});
    }
    for (const AttachLink& l : links.goal_links) {
      edges_.push_back(Edge{l.node, goal_node_, &l.primitives});
    }
    alive_.assign(edges_.size(), true);
    weight_.assign(edges_.size(), std::nullopt);
  }

  std::uint32_t start_node() const { return start_node_; }
  std::uint32_t goal_node() const { return goal_node_; }
  const std::vector<MotionPrimitive>& chain(std::uint32_t e) const {
    return *edges_[e].primitives;
  }
  void erase(std::uint32_t e) { alive_[e] = false; }

  SearchResult search(double flip_penalty, double initial_reverse_penalty) {
    std::vector<std::vector<SearchEdge>> adj(num_nodes_);
    for (std::uint32_t e = 0; e < edges_.size(); ++e) {
      if (!alive_[e]) continue;
      const double w = weight(e);
      if (!std::isfinite(w)) continue;
      const auto& prims = *edges_[e].primitives;
      SearchEdge se;
      se.to = edges_[e].to;
      se.id = e;
      se.internal_cost = w;
      if (!prims.empty()) {
        se.first = gear_of(prims.front().direction());
        se.last = gear_of(prims.back().direction());
      }
      adj[edges_[e].from].push_back(se);
    }
    return gear_dijkstra(num_nodes_, adj, start_node_, goal_node_,
                         flip_penalty, initial_reverse_penalty);
  }

 private:
  struct Edge {
    std::uint32_t from;
    std::uint32_t to;
    const std::vector<MotionPrimitive>* primitives;
  };

  /// Internal edge weight under the QualitySpec, memoized. Clearance
  /// weighting prices the chain by sampling; a chain that already collides
  /// gets +inf so the search never proposes it.
  double weight(std::uint32_t e) {
    if (weight_[e].has_value()) return *weight_[e];
    const auto& prims = *edges_[e].primitives;
    double clearance = -1.0;
    if (spec_.w_clearance > 0.0 && !prims.empty()) {
      CarPath path{prims.front().start_pose(), prims};
      auto res = path_clearance_cost(path, scene_, spec_);
      if (!res.ok()) {
        weight_[e] = std::numeric_limits<double>::infinity();
        return *weight_[e];
      }
      clearance = res.value().cost;
    }
    weight_[e] = edge_internal_cost(prims, spec_.w_length, spec_.w_smoothness,
                                    spec_.w_clearance, clearance,
                                    spec_.w_reversals);
    return *weight_[e];
  }

  const Scene& scene_;
  const QualitySpec& spec_;
  std::size_t num_nodes_ = 0;
  std::uint32_t start_node_ = 0;
  std::uint32_t goal_node_ = 0;
  std::vector<Edge> edges_;
  std::vector<bool> alive_;
  std::vector<std::optional<double>> weight_;
};

}  // namespace detail

/// Lazy C-PRM query: search the transition graph, collision-check only the
/// winning path, delete the first colliding transition and re-search, until
/// a path validates end to end. The roadmap itself is never mutated.
inline Result<QueryResult> query(const ApproxRoadmap& arm, const Scene& scene,
                                 const Pose& start, const Pose& goal,
                                 const SweepCheckConfig& cfg,
                                 const QualitySpec& spec,
                                 const QueryOptions& opts = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  auto links = attach_query_poses(arm, scene, start, goal, opts.attach_fanout,
                                  opts.connect);
  if (!links.ok()) return Result<QueryResult>(links.error());

  detail::QueryGraph graph(arm, scene, spec, links.value());
  const double flip_penalty = spec.w_smoothness * kPi + spec.w_reversals;
  const double initial_reverse = spec.w_reversals;

  QueryResult out;
  std::vector<bool> known_clear;
  bool first_iteration = true;
  for (;;) {
    detail::SearchResult found = graph.search(flip_penalty, initial_reverse);
    if (!found.found) {
      return Result<QueryResult>(Errc::no_path,
                                 "start and goal are disconnected");
    }
    if (!first_iteration) ++out.stats.replans;
    first_iteration = false;

    bool clean = true;
    for (std::uint32_t e : found.edge_ids) {
      if (e < known_clear.size() && known_clear[e]) continue;
      ++out.stats.edges_checked;
      bool collides = false;
      for (const MotionPrimitive& prim : graph.chain(e)) {
        if (primitive_in_collision(scene, prim, cfg)) {
          collides = true;
          break;
        }
      }
      if (collides) {
        graph.erase(e);
        ++out.stats.edges_discarded;
        clean = false;
        break;
      }
      if (e >= known_clear.size()) known_clear.resize(e + 1, false);
      known_clear[e] = true;
    }
    if (!clean) continue;

    out.path.start = start;
    for (std::uint32_t e : found.edge_ids) {
      const auto& prims = graph.chain(e);
      out.path.primitives.insert(out.path.primitives.end(), prims.begin(),
                                 prims.end());
    }
    out.validated = true;
    auto cost = path_cost(out.path, scene, spec);
    if (!cost.ok()) return Result<QueryResult>(cost.error());
    out.cost = cost.value();
    out.stats.wall_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    return out;
  }
}

}  // namespace carplan
