// C-PRM core: approximate roadmap construction, query-pose attachment, and
// the lazy query loop, including optimality against exhaustive enumeration.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "carplan/cprm.hpp"
#include "oracle.hpp"

using namespace carplan;

namespace {

Scene empty_scene(double size = 20.0) {
  Scene s;
  s.bounds = Bounds{0.0, 0.0, size, size};
  return s;
}

ControlRoadmap make_roadmap(std::vector<Point> nodes,
                            std::vector<std::pair<int, int>> edges) {
  ControlRoadmap rm;
  rm.nodes = std::move(nodes);
  rm.edges = std::move(edges);
  rm.adjacency.assign(rm.nodes.size(), {});
  for (auto [a, b] : rm.edges) {
    rm.adjacency[static_cast<std::size_t>(a)].push_back(b);
    rm.adjacency[static_cast<std::size_t>(b)].push_back(a);
  }
  for (auto& nbrs : rm.adjacency) std::sort(nbrs.begin(), nbrs.end());
  rm.index = PointGridIndex(rm.nodes);
  return rm;
}

std::string serialize(const CarPath& path) {
  std::ostringstream os;
  os.precision(17);
  os << path.start.position.x << ',' << path.start.position.y << ','
     << path.start.heading << '|';
  for (const auto& prim : path.primitives) {
    os << (prim.is_arc() ? 'a' : 's')
       << (prim.direction() == Direction::forward ? '+' : '-');
    const Pose e = prim.end_pose();
    os << e.position.x << ',' << e.position.y << ',' << e.heading << ';';
  }
  return os.str();
}

/// Minimum path_cost over all collision-free simple transition sequences,
/// assembled exactly as query() assembles its result. Exhaustive: only for
/// tiny roadmaps.
double brute_force_best(const ApproxRoadmap& arm, const Scene& scene,
                        const Pose& start, const SweepCheckConfig& sweep,
                        const QualitySpec& spec, const AttachResult& links) {
  double best = std::numeric_limits<double>::infinity();
  // Transition adjacency by from-node.
  std::vector<std::vector<std::size_t>> out(arm.nodes.size());
  for (std::size_t i = 0; i < arm.transitions.size(); ++i) {
    out[arm.transitions[i].from].push_back(i);
  }
  std::vector<bool> visited(arm.nodes.size(), false);

  const auto assemble = [&](const AttachLink& s_link,
                            const std::vector<std::size_t>& seq,
                            const AttachLink& g_link) {
    CarPath path;
    path.start = start;
    for (const auto& prim : s_link.primitives) path.primitives.push_back(prim);
    for (std::size_t t : seq) {
      for (const auto& prim : arm.transitions[t].primitives) {
        path.primitives.push_back(prim);
      }
    }
    for (const auto& prim : g_link.primitives) path.primitives.push_back(prim);
    for (const auto& prim : path.primitives) {
      if (primitive_in_collision(scene, prim, sweep)) return;
    }
    auto cost = path_cost(path, scene, spec);
    if (cost.ok()) best = std::min(best, cost.value().total);
  };

  for (const AttachLink& s_link : links.start_links) {
    // DFS over simple node sequences from the start link's node.
    std::vector<std::size_t> seq;
    auto dfs = [&](auto&& self, std::uint32_t node) -> void {
      for (const AttachLink& g_link : links.goal_links) {
        if (g_link.node == node) assemble(s_link, seq, g_link);
      }
      visited[node] = true;
      for (std::size_t t : out[node]) {
        const std::uint32_t next = arm.transitions[t].to;
        if (visited[next]) continue;
        seq.push_back(t);
        self(self, next);
        seq.pop_back();
      }
      visited[node] = false;
    };
    dfs(dfs, s_link.node);
  }
  return best;
}

}  // namespace

TEST_CASE("worked example: right-angle corner becomes a quarter-arc transition") {
  Scene s = empty_scene();
  const ControlRoadmap rm =
      make_roadmap({Point{0, 0}, Point{2, 0}, Point{2, 2}}, {{0, 1}, {1, 2}});
  const ApproxRoadmap arm = build_approx_roadmap(rm, s, RadiusMode::fixed_min);

  // Two directed midpoint nodes per control edge.
  REQUIRE(arm.nodes.size() == 4);
  CHECK(arm.nodes[0].pose.position.x == Catch::Approx(1.0));
  CHECK(arm.nodes[0].pose.position.y == Catch::Approx(0.0).margin(1e-15));
  CHECK(arm.nodes[0].pose.heading == Catch::Approx(0.0).margin(1e-15));
  CHECK(arm.nodes[2].pose.position.x == Catch::Approx(2.0));
  CHECK(arm.nodes[2].pose.position.y == Catch::Approx(1.0));
  CHECK(arm.nodes[2].pose.heading == Catch::Approx(kPi / 2.0));

  // The corner admits the forward fillet and its mirrored reverse twin.
  REQUIRE(arm.transitions.size() == 2);
  const Transition* fwd = nullptr;
  for (const Transition& t : arm.transitions) {
    if (t.from == 0 && t.to == 2) fwd = &t;
  }
  REQUIRE(fwd != nullptr);
  // t = r*tan(45deg) = 1 consumes both half-edges: pure arc, no leads.
  REQUIRE(fwd->primitives.size() == 1);
  REQUIRE(fwd->primitives[0].is_arc());
  CHECK(fwd->primitives[0].arc().radius == Catch::Approx(1.0));
  CHECK(fwd->primitives[0].arc().center.x == Catch::Approx(1.0));
  CHECK(fwd->primitives[0].arc().center.y == Catch::Approx(1.0));
  CHECK(std::abs(fwd->primitives[0].arc().sweep) == Catch::Approx(kPi / 2.0));
  CHECK(arm.stats.corners_attempted == 2);
  CHECK(arm.stats.corners_skipped == 0);
}

TEST_CASE("collinear control points give a single straight transition") {
  Scene s = empty_scene();
  const ControlRoadmap rm =
      make_roadmap({Point{0, 0}, Point{2, 0}, Point{4, 0}}, {{0, 1}, {1, 2}});
  const ApproxRoadmap arm = build_approx_roadmap(rm, s, RadiusMode::fixed_min);
  REQUIRE(arm.transitions.size() == 2);
  for (const Transition& t : arm.transitions) {
    REQUIRE(t.primitives.size() == 1);
    CHECK(t.primitives[0].is_straight());
    CHECK(t.primitives[0].length() == Catch::Approx(2.0));
  }
}

TEST_CASE("too-sharp corners are skipped and counted") {
  Scene s = empty_scene();
  s.car.min_turn_radius = 1.0;
  const ControlRoadmap rm = make_roadmap(
      {Point{0, 0}, Point{0.5, 0}, Point{0.5, 0.5}}, {{0, 1}, {1, 2}});
  const ApproxRoadmap arm = build_approx_roadmap(rm, s, RadiusMode::fixed_min);
  CHECK(arm.transitions.empty());
  CHECK(arm.stats.corners_attempted == 2);
  CHECK(arm.stats.corners_skipped == 2);
}

TEST_CASE("transitions are curvature-bounded and G1-continuous") {
  Scene s = empty_scene();
  PrmConfig cfg;
  cfg.num_samples = 120;
  cfg.num_neighbors = 5;
  cfg.seed = 17;
  auto rm = build_control_roadmap(s, cfg);
  REQUIRE(rm.ok());
  for (RadiusMode mode : {RadiusMode::fixed_min, RadiusMode::max_fit}) {
    const ApproxRoadmap arm = build_approx_roadmap(rm.value(), s, mode);
    REQUIRE_FALSE(arm.transitions.empty());
    for (const Transition& t : arm.transitions) {
      // Chain runs between the two node poses, continuously.
      CarPath path;
      path.start = arm.nodes[t.from].pose;
      path.primitives = t.primitives;
      auto end = path_end_pose(path);
      REQUIRE(end.ok());
      CHECK(distance(end.value().position, arm.nodes[t.to].pose.position) < 1e-9);
      CHECK(std::abs(angle_diff(end.value().heading, arm.nodes[t.to].pose.heading)) <
            1e-9);
      for (const auto& prim : t.primitives) {
        CHECK(prim.direction() == Direction::forward);
        if (prim.is_arc()) {
          CHECK(prim.arc().radius >= s.car.min_turn_radius - 1e-12);
        }
      }
    }
  }
}

TEST_CASE("max-fit mode never tightens below fixed-min and can widen") {
  Scene s = empty_scene();
  // Long edges around a 90-degree corner leave room to widen the arc.
  const ControlRoadmap rm =
      make_roadmap({Point{0, 0}, Point{8, 0}, Point{8, 8}}, {{0, 1}, {1, 2}});
  const ApproxRoadmap tight = build_approx_roadmap(rm, s, RadiusMode::fixed_min);
  const ApproxRoadmap wide = build_approx_roadmap(rm, s, RadiusMode::max_fit);
  REQUIRE(tight.transitions.size() == 2);
  REQUIRE(wide.transitions.size() == 2);
  double r_tight = 0.0, r_wide = 0.0;
  for (const auto& prim : tight.transitions[0].primitives) {
    if (prim.is_arc()) r_tight = prim.arc().radius;
  }
  for (const auto& prim : wide.transitions[0].primitives) {
    if (prim.is_arc()) r_wide = prim.arc().radius;
  }
  CHECK(r_tight == Catch::Approx(1.0));
  // Half-edge 4: max radius with t = r*tan(pi/4) <= 4 is 4.
  CHECK(r_wide == Catch::Approx(4.0));
}

TEST_CASE("attach_query_poses links, identities, and failures") {
  Scene s = empty_scene();
  const ControlRoadmap rm = make_roadmap(
      {Point{4, 10}, Point{10, 10}, Point{16, 10}}, {{0, 1}, {1, 2}});
  const ApproxRoadmap arm = build_approx_roadmap(rm, s, RadiusMode::fixed_min);

  SECTION("start identical to a node pose yields a zero-length link") {
    // Node 0 is the (0,1) edge midpoint (7,10) heading +x.
    auto links = attach_query_poses(arm, s, Pose{7, 10, 0}, Pose{16, 10, 0}, 3);
    REQUIRE(links.ok());
    bool found_identity = false;
    for (const AttachLink& l : links.value().start_links) {
      if (l.node == 0) {
        CHECK(l.primitives.empty());
        found_identity = true;
      }
    }
    CHECK(found_identity);
  }
  SECTION("start directly behind a node pose links with one straight") {
    auto links = attach_query_poses(arm, s, Pose{2, 10, 0}, Pose{16, 10, 0}, 1);
    REQUIRE(links.ok());
    REQUIRE(links.value().start_links.size() == 1);
    const AttachLink& l = links.value().start_links[0];
    CHECK(l.node == 0);  // midpoint (7,10): nearest reachable, 5 ahead
    REQUIRE(l.primitives.size() == 1);
    CHECK(l.primitives[0].is_straight());
    CHECK(l.primitives[0].length() == Catch::Approx(5.0));
  }
  SECTION("start facing away from every node is unreachable without reverse") {
    auto links = attach_query_poses(arm, s, Pose{10, 5, -kPi / 2.0},
                                    Pose{16, 10, 0}, 5);
    REQUIRE_FALSE(links.ok());
    CHECK(links.error().code == Errc::unreachable);
  }
  SECTION("the same pose attaches fine once reverse is allowed") {
    ConnectConfig cc;
    cc.allow_reverse = true;
    auto links = attach_query_poses(arm, s, Pose{10, 5, -kPi / 2.0},
                                    Pose{16, 10, 0}, 5, cc);
    CHECK(links.ok());
  }
}

TEST_CASE("path_end_pose worked examples") {
  SECTION("straight forward") {
    CarPath p;
    p.start = Pose{0, 0, 0};
    p.primitives.push_back(straight_from_pose(p.start, 5.0, Direction::forward));
    auto e = path_end_pose(p);
    REQUIRE(e.ok());
    CHECK(e.value().position.x == Catch::Approx(5.0));
    CHECK(std::abs(e.value().heading) < 1e-12);
  }
  SECTION("quarter arc turning left lands at (1,1,pi/2)") {
    CarPath p;
    p.start = Pose{0, 0, 0};
    p.primitives.push_back(MotionPrimitive::arc(
        Arc{Point{0, 1}, 1.0, -kPi / 2.0, kPi / 2.0}, Direction::forward));
    auto e = path_end_pose(p);
    REQUIRE(e.ok());
    CHECK(e.value().position.x == Catch::Approx(1.0));
    CHECK(e.value().position.y == Catch::Approx(1.0));
    CHECK(e.value().heading == Catch::Approx(kPi / 2.0));
    // Independent check via the parametric oracle.
    const auto o = oracle::pose_on_arc({0, 1}, 1.0, -kPi / 2.0, kPi / 2.0,
                                       kPi / 2.0, false);
    CHECK(oracle::dist_point_point(o.position, {1, 1}) < 1e-12);
  }
  SECTION("reverse straight backs up without turning") {
    CarPath p;
    p.start = Pose{0, 0, 0};
    p.primitives.push_back(straight_from_pose(p.start, 2.0, Direction::reverse));
    auto e = path_end_pose(p);
    REQUIRE(e.ok());
    CHECK(e.value().position.x == Catch::Approx(-2.0));
    CHECK(std::abs(e.value().heading) < 1e-12);
  }
}

TEST_CASE("query in an empty scene validates on the first iteration") {
  Scene s = empty_scene();
  PrmConfig cfg;
  cfg.num_samples = 150;
  cfg.seed = 5;
  auto rm = build_control_roadmap(s, cfg);
  REQUIRE(rm.ok());
  const ApproxRoadmap arm = build_approx_roadmap(rm.value(), s, RadiusMode::fixed_min);
  const SweepCheckConfig sweep = SweepCheckConfig::for_scene(s);
  auto qr = query(arm, s, Pose{2, 10, 0}, Pose{18, 10, 0}, sweep,
                  QualitySpec::length_only());
  REQUIRE(qr.ok());
  CHECK(qr.value().validated);
  CHECK(qr.value().stats.replans == 0);
  CHECK(qr.value().stats.edges_discarded == 0);

  // The reported cost is the standalone cost of the returned path.
  auto recheck = path_cost(qr.value().path, s, QualitySpec::length_only());
  REQUIRE(recheck.ok());
  CHECK(qr.value().cost.total == Catch::Approx(recheck.value().total).margin(1e-12));

  // Endpoints are met exactly.
  auto end = path_end_pose(qr.value().path);
  REQUIRE(end.ok());
  CHECK(distance(end.value().position, Point{18, 10}) < 1e-9);
}

TEST_CASE("a blocking wall forces lazy edge deletions, result still valid") {
  Scene s = empty_scene();
  s.obstacles.push_back(Polygon::unchecked(
      {Point{9.5, 4}, Point{10.5, 4}, Point{10.5, 16}, Point{9.5, 16}}));
  PrmConfig cfg;
  cfg.num_samples = 250;
  cfg.seed = 2;
  auto rm = build_control_roadmap(s, cfg);
  REQUIRE(rm.ok());
  const ApproxRoadmap arm = build_approx_roadmap(rm.value(), s, RadiusMode::fixed_min);
  const SweepCheckConfig sweep = SweepCheckConfig::for_scene(s);
  auto qr = query(arm, s, Pose{2, 10, 0}, Pose{18, 10, 0}, sweep,
                  QualitySpec::length_only());
  REQUIRE(qr.ok());
  CHECK(qr.value().validated);
  CHECK(qr.value().stats.edges_discarded >= 1);  // the straight corridor dies

  // Every primitive of the result passes a 100x denser collision check.
  SweepCheckConfig dense = sweep;
  dense.step = sweep.step / 100.0;
  for (const auto& prim : qr.value().path.primitives) {
    CHECK_FALSE(primitive_in_collision(s, prim, dense));
  }
}

TEST_CASE("sealing the goal chamber disconnects the graph: NoPath") {
  Scene s = empty_scene();
  // A box around the goal with thick walls; its interior is big enough to
  // hold roadmap nodes, so attachment succeeds and the lazy loop must
  // exhaust the crossing edges.
  const double x0 = 13, x1 = 19, y0 = 7, y1 = 13;
  s.obstacles.push_back(Polygon::unchecked(
      {Point{x0, y0}, Point{x1, y0}, Point{x1, y0 + 0.5}, Point{x0, y0 + 0.5}}));
  s.obstacles.push_back(Polygon::unchecked(
      {Point{x0, y1 - 0.5}, Point{x1, y1 - 0.5}, Point{x1, y1}, Point{x0, y1}}));
  s.obstacles.push_back(Polygon::unchecked(
      {Point{x0, y0}, Point{x0 + 0.5, y0}, Point{x0 + 0.5, y1}, Point{x0, y1}}));
  s.obstacles.push_back(Polygon::unchecked(
      {Point{x1 - 0.5, y0}, Point{x1, y0}, Point{x1, y1}, Point{x1 - 0.5, y1}}));
  PrmConfig cfg;
  cfg.num_samples = 220;
  cfg.seed = 4;
  auto rm = build_control_roadmap(s, cfg);
  REQUIRE(rm.ok());
  const ApproxRoadmap arm = build_approx_roadmap(rm.value(), s, RadiusMode::fixed_min);
  const SweepCheckConfig sweep = SweepCheckConfig::for_scene(s);
  auto qr = query(arm, s, Pose{2, 10, 0}, Pose{16, 10, 0}, sweep,
                  QualitySpec::length_only());
  REQUIRE_FALSE(qr.ok());
  CHECK(qr.error().code == Errc::no_path);
}

TEST_CASE("query is deterministic") {
  Scene s = empty_scene();
  s.obstacles.push_back(Polygon::unchecked(
      {Point{8, 6}, Point{12, 6}, Point{12, 14}, Point{8, 14}}));
  PrmConfig cfg;
  cfg.num_samples = 200;
  cfg.seed = 21;
  auto rm = build_control_roadmap(s, cfg);
  REQUIRE(rm.ok());
  const ApproxRoadmap arm = build_approx_roadmap(rm.value(), s, RadiusMode::fixed_min);
  const SweepCheckConfig sweep = SweepCheckConfig::for_scene(s);
  auto a = query(arm, s, Pose{2, 10, 0}, Pose{18, 10, 0}, sweep,
                 QualitySpec::length_only());
  auto b = query(arm, s, Pose{2, 10, 0}, Pose{18, 10, 0}, sweep,
                 QualitySpec::length_only());
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  CHECK(serialize(a.value().path) == serialize(b.value().path));
}

TEST_CASE("lazy query matches exhaustive search on tiny roadmaps") {
  std::mt19937_64 rng(314);
  std::uniform_real_distribution<double> jitter(-0.8, 0.8);
  int instances = 0;
  while (instances < 10) {
    Scene s = empty_scene();
    // Small obstacle somewhere in the middle band.
    const double ox = 7.0 + 4.0 * std::uniform_real_distribution<double>(0, 1)(rng);
    const double oy = 7.0 + 4.0 * std::uniform_real_distribution<double>(0, 1)(rng);
    s.obstacles.push_back(Polygon::unchecked({Point{ox, oy}, Point{ox + 2, oy},
                                              Point{ox + 2, oy + 2},
                                              Point{ox, oy + 2}}));
    // A jittered ladder of control nodes: two rails plus rungs.
    std::vector<Point> nodes;
    for (int i = 0; i < 3; ++i) {
      nodes.push_back(Point{5.0 + 5.0 * i + jitter(rng), 5.0 + jitter(rng)});
      nodes.push_back(Point{5.0 + 5.0 * i + jitter(rng), 15.0 + jitter(rng)});
    }
    std::vector<std::pair<int, int>> edges = {{0, 2}, {2, 4}, {1, 3},
                                              {3, 5}, {0, 1}, {4, 5}};
    const ApproxRoadmap arm =
        build_approx_roadmap(make_roadmap(nodes, edges), s, RadiusMode::fixed_min);
    if (arm.transitions.empty() || arm.transitions.size() > 12) continue;

    const Pose start{2, 10, 0};
    const Pose goal{18, 10, 0};
    const SweepCheckConfig sweep = SweepCheckConfig::for_scene(s);
    const QualitySpec spec = QualitySpec::length_only();
    auto links = attach_query_poses(arm, s, start, goal, 10);
    if (!links.ok()) continue;
    const double best =
        brute_force_best(arm, s, start, sweep, spec, links.value());
    auto qr = query(arm, s, start, goal, sweep, spec);
    if (!std::isfinite(best)) {
      CHECK_FALSE(qr.ok());
      continue;
    }
    REQUIRE(qr.ok());
    ++instances;
    CHECK(qr.value().cost.total == Catch::Approx(best).margin(1e-9));
  }
}
