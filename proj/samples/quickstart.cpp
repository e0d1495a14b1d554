// Minimal end-to-end use of the carplan library: load a scene, plan once,
// hybridize six runs, and write the result as JSON + SVG.
//
// Build via the top-level CMake project (target: quickstart), then run
//   ./quickstart scenes/two_corridor.json

#include <cstdio>

#include "carplan/cprm.hpp"
#include "carplan/hybridizer.hpp"
#include "carplan/json_io.hpp"
#include "carplan/svg.hpp"

using namespace carplan;

int main(int argc, char** argv) {
  const char* scene_file = argc > 1 ? argv[1] : "scenes/two_corridor.json";
  auto scene = load_scene(scene_file);
  if (!scene.ok()) {
    std::fprintf(stderr, "%s\n", scene.error().describe().c_str());
    return 1;
  }

  const Pose start{2.0, 10.0, 0.0};
  const Pose goal{18.0, 10.0, 0.0};
  const QualitySpec spec = QualitySpec::length_only();
  const SweepCheckConfig sweep = SweepCheckConfig::for_scene(scene.value());
  ConnectConfig cc;
  cc.min_turn_radius = scene.value().car.min_turn_radius;

  // One planner run: control roadmap -> approximate roadmap -> lazy query.
  auto planner = [&](std::uint64_t seed) -> Result<CarPath> {
    PrmConfig pc;
    pc.seed = seed;
    auto rm = build_control_roadmap(scene.value(), pc);
    if (!rm.ok()) return Result<CarPath>(rm.error());
    ApproxRoadmap arm =
        build_approx_roadmap(rm.value(), scene.value(), RadiusMode::fixed_min);
    QueryOptions qo;
    qo.connect = cc;
    auto qr = query(arm, scene.value(), start, goal, sweep, spec, qo);
    if (!qr.ok()) return Result<CarPath>(qr.error());
    std::printf("seed %llu: length %.3f after %zu replans\n",
                static_cast<unsigned long long>(seed), qr.value().cost.length,
                qr.value().stats.replans);
    return qr.value().path;
  };

  // Fuse six runs into one path that is never worse than the best input.
  HybridizeConfig hc;
  auto hybrid = hybridize(planner, scene.value(), start, goal, spec, hc, cc, sweep);
  if (!hybrid.ok()) {
    std::fprintf(stderr, "%s\n", hybrid.error().describe().c_str());
    return 1;
  }
  std::printf("hybrid: length %.3f via %zu bridge edges\n",
              hybrid.value().report.hybrid_cost.length,
              hybrid.value().report.bridges.inserted);

  auto w1 = write_text_file("quickstart_path.json",
                            path_to_json(hybrid.value().path,
                                         hybrid.value().report.hybrid_cost)
                                    .dump(2) +
                                "\n");
  auto w2 = write_text_file("quickstart.svg",
                            render_svg(scene.value(), {hybrid.value().path},
                                       {SvgPathStyle{"#000000", 0.12}}));
  if (!w1.ok() || !w2.ok()) return 1;
  std::puts("wrote quickstart_path.json and quickstart.svg");
  return 0;
}
