// Local planner: heading-line intersection + tangent arc connections.
// Worked examples are verified against the analytic construction; random
// pairs are verified against the endpoint-exactness and curvature contracts.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "carplan/local_planner.hpp"
#include "oracle.hpp"

using namespace carplan;

namespace {

CarPath as_path(const Pose& start, const std::vector<MotionPrimitive>& chain) {
  CarPath p;
  p.start = start;
  p.primitives = chain;
  return p;
}

double chain_length(const std::vector<MotionPrimitive>& chain) {
  double total = 0.0;
  for (const auto& prim : chain) total += prim.length();
  return total;
}

bool endpoint_exact(const Pose& a, const Pose& b,
                    const std::vector<MotionPrimitive>& chain) {
  auto end = path_end_pose(as_path(a, chain));
  if (!end.ok()) return false;
  return distance(end.value().position, b.position) < 1e-9 &&
         std::abs(angle_diff(end.value().heading, b.heading)) < 1e-9;
}

}  // namespace

TEST_CASE("worked example: quarter turn to (2,2,90deg)") {
  ConnectConfig cfg;
  const Pose a{0, 0, 0};
  const Pose b{2, 2, kPi / 2.0};
  auto chain = connect_poses(a, b, cfg);
  REQUIRE(chain.ok());
  REQUIRE(chain.value().size() == 1);
  const MotionPrimitive& prim = chain.value()[0];
  REQUIRE(prim.is_arc());
  CHECK(prim.arc().radius == Catch::Approx(2.0));
  CHECK(prim.arc().center.x == Catch::Approx(0.0).margin(1e-12));
  CHECK(prim.arc().center.y == Catch::Approx(2.0));
  CHECK(prim.arc().sweep == Catch::Approx(kPi / 2.0));
  CHECK(prim.length() == Catch::Approx(kPi));
  CHECK(endpoint_exact(a, b, chain.value()));

  // Independent check: the arc's derivative-based poses match both ends.
  const auto s0 = oracle::pose_on_arc({0, 2}, 2.0, prim.arc().start_angle,
                                      prim.arc().sweep, 0.0, false);
  CHECK(oracle::dist_point_point(s0.position, {0, 0}) < 1e-9);
  CHECK(std::abs(angle_diff(s0.facing, 0.0)) < 1e-9);
}

TEST_CASE("worked example: straight then arc to (3,1,90deg)") {
  ConnectConfig cfg;
  const Pose a{0, 0, 0};
  const Pose b{3, 1, kPi / 2.0};
  auto chain = connect_poses(a, b, cfg);
  REQUIRE(chain.ok());
  REQUIRE(chain.value().size() == 2);
  REQUIRE(chain.value()[0].is_straight());
  CHECK(chain.value()[0].length() == Catch::Approx(2.0));
  REQUIRE(chain.value()[1].is_arc());
  CHECK(chain.value()[1].arc().radius == Catch::Approx(1.0));
  CHECK(chain.value()[1].arc().center.x == Catch::Approx(2.0));
  CHECK(chain.value()[1].arc().center.y == Catch::Approx(1.0));
  CHECK(chain.value()[1].arc().sweep == Catch::Approx(kPi / 2.0));
  CHECK(chain_length(chain.value()) == Catch::Approx(2.0 + kPi / 2.0));
  CHECK(endpoint_exact(a, b, chain.value()));
}

TEST_CASE("worked example: aligned collinear pair is a single straight") {
  ConnectConfig cfg;
  auto chain = connect_poses(Pose{0, 0, 0}, Pose{5, 0, 0}, cfg);
  REQUIRE(chain.ok());
  REQUIRE(chain.value().size() == 1);
  CHECK(chain.value()[0].is_straight());
  CHECK(chain.value()[0].direction() == Direction::forward);
  CHECK(chain.value()[0].length() == Catch::Approx(5.0));
}

TEST_CASE("worked example: too-sharp corner is rejected") {
  ConnectConfig cfg;  // min_turn_radius = 1
  auto chain = connect_poses(Pose{0, 0, 0}, Pose{0.5, 0.5, kPi / 2.0}, cfg);
  REQUIRE_FALSE(chain.ok());
  CHECK(chain.error().code == Errc::turn_too_sharp);
}

TEST_CASE("error taxonomy") {
  ConnectConfig cfg;
  SECTION("target behind the start needs reverse") {
    auto chain = connect_poses(Pose{0, 0, 0}, Pose{-3, 2, kPi / 2.0}, cfg);
    REQUIRE_FALSE(chain.ok());
    CHECK(chain.error().code == Errc::no_forward_connection);
  }
  SECTION("parallel but offset headings") {
    auto chain = connect_poses(Pose{0, 0, 0}, Pose{3, 1, 0}, cfg);
    REQUIRE_FALSE(chain.ok());
    CHECK(chain.error().code == Errc::parallel_unaligned);
  }
  SECTION("explicit length cap") {
    cfg.max_connect_length = 1.0;
    auto chain = connect_poses(Pose{0, 0, 0}, Pose{2, 2, kPi / 2.0}, cfg);
    REQUIRE_FALSE(chain.ok());
    CHECK(chain.error().code == Errc::too_long);
  }
  SECTION("identical poses connect with an empty chain") {
    auto chain = connect_poses(Pose{1, 2, 0.5}, Pose{1, 2, 0.5}, cfg);
    REQUIRE(chain.ok());
    CHECK(chain.value().empty());
  }
}

TEST_CASE("random feasible pairs: endpoint exactness and curvature bound") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> pd(-10.0, 10.0);
  std::uniform_real_distribution<double> ad(0.0, 2.0 * kPi);
  ConnectConfig cfg;
  cfg.max_connect_length = 1e9;  // exactness is the subject, not pruning
  int connected = 0;
  int attempts = 0;
  while (connected < 3000 && attempts < 200000) {
    ++attempts;
    const Pose a{pd(rng), pd(rng), ad(rng)};
    const Pose b{pd(rng), pd(rng), ad(rng)};
    auto chain = connect_poses(a, b, cfg);
    if (!chain.ok()) continue;
    ++connected;
    CHECK(endpoint_exact(a, b, chain.value()));
    for (const auto& prim : chain.value()) {
      CHECK(prim.direction() == Direction::forward);
      if (prim.is_arc()) CHECK(prim.arc().radius >= cfg.min_turn_radius - 1e-12);
    }
    CHECK(chain_length(chain.value()) >= distance(a.position, b.position) - 1e-9);
  }
  REQUIRE(connected == 3000);
}

TEST_CASE("reverse variants reach otherwise infeasible targets") {
  ConnectConfig cfg;
  cfg.allow_reverse = true;

  SECTION("target directly behind: single reverse straight") {
    auto chain = connect_poses(Pose{0, 0, 0}, Pose{-4, 0, 0}, cfg);
    REQUIRE(chain.ok());
    REQUIRE(chain.value().size() == 1);
    CHECK(chain.value()[0].is_straight());
    CHECK(chain.value()[0].direction() == Direction::reverse);
    CHECK(endpoint_exact(Pose{0, 0, 0}, Pose{-4, 0, 0}, chain.value()));
  }
  SECTION("random reverse-requiring pairs stay exact") {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> pd(-8.0, 8.0);
    std::uniform_real_distribution<double> ad(0.0, 2.0 * kPi);
    ConnectConfig fwd_only;
    fwd_only.max_connect_length = 1e9;
    ConnectConfig with_rev = fwd_only;
    with_rev.allow_reverse = true;
    int reverse_chains = 0;
    int attempts = 0;
    while (reverse_chains < 500 && attempts < 200000) {
      ++attempts;
      const Pose a{pd(rng), pd(rng), ad(rng)};
      const Pose b{pd(rng), pd(rng), ad(rng)};
      if (connect_poses(a, b, fwd_only).ok()) continue;  // forward suffices
      auto chain = connect_poses(a, b, with_rev);
      if (!chain.ok()) continue;
      ++reverse_chains;
      CHECK(endpoint_exact(a, b, chain.value()));
      int flips = 0;
      for (std::size_t i = 0; i < chain.value().size(); ++i) {
        if (chain.value()[i].is_arc()) {
          CHECK(chain.value()[i].arc().radius >= with_rev.min_turn_radius - 1e-12);
        }
        if (i > 0 && chain.value()[i].direction() !=
                         chain.value()[i - 1].direction()) {
          ++flips;
        }
      }
      CHECK(flips <= 2);
    }
    REQUIRE(reverse_chains == 500);
  }
  SECTION("with reverse enabled the planner never returns a longer chain") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> pd(-8.0, 8.0);
    std::uniform_real_distribution<double> ad(0.0, 2.0 * kPi);
    ConnectConfig fwd_only;
    ConnectConfig with_rev;
    with_rev.allow_reverse = true;
    int compared = 0;
    int attempts = 0;
    while (compared < 500 && attempts < 100000) {
      ++attempts;
      const Pose a{pd(rng), pd(rng), ad(rng)};
      const Pose b{pd(rng), pd(rng), ad(rng)};
      auto fwd = connect_poses(a, b, fwd_only);
      if (!fwd.ok()) continue;
      auto rev = connect_poses(a, b, with_rev);
      REQUIRE(rev.ok());
      ++compared;
      CHECK(chain_length(rev.value()) <= chain_length(fwd.value()) + 1e-9);
    }
    REQUIRE(compared == 500);
  }
}

TEST_CASE("rigid-motion equivariance") {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> pd(-6.0, 6.0);
  std::uniform_real_distribution<double> ad(0.0, 2.0 * kPi);
  ConnectConfig cfg;
  cfg.max_connect_length = 1e9;
  int checked = 0;
  int attempts = 0;
  while (checked < 300 && attempts < 100000) {
    ++attempts;
    const Pose a{pd(rng), pd(rng), ad(rng)};
    const Pose b{pd(rng), pd(rng), ad(rng)};
    auto base = connect_poses(a, b, cfg);
    if (!base.ok()) continue;
    ++checked;

    const double rot = ad(rng);
    const Point shift{pd(rng), pd(rng)};
    auto xf = [&](const Pose& p) {
      const double c = std::cos(rot), s = std::sin(rot);
      return Pose{c * p.position.x - s * p.position.y + shift.x,
                  s * p.position.x + c * p.position.y + shift.y,
                  p.heading + rot};
    };
    auto moved = connect_poses(xf(a), xf(b), cfg);
    REQUIRE(moved.ok());
    REQUIRE(moved.value().size() == base.value().size());
    for (std::size_t i = 0; i < base.value().size(); ++i) {
      CHECK(moved.value()[i].length() ==
            Catch::Approx(base.value()[i].length()).margin(1e-9));
      CHECK(moved.value()[i].is_arc() == base.value()[i].is_arc());
      if (base.value()[i].is_arc()) {
        CHECK(moved.value()[i].arc().radius ==
              Catch::Approx(base.value()[i].arc().radius).margin(1e-9));
        CHECK(moved.value()[i].arc().sweep ==
              Catch::Approx(base.value()[i].arc().sweep).margin(1e-9));
      }
    }
  }
  REQUIRE(checked == 300);
}
