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

// carplan: plan car-like paths with C-PRM, fuse runs by hybridization,
// evaluate costs, render SVG, and benchmark the bundled scenes.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "carplan/cprm.hpp"
#include "carplan/hybridizer.hpp"
#include "carplan/json_io.hpp"
#include "carplan/manifest.hpp"
#include "carplan/svg.hpp"
#include "carplan/version.hpp"

namespace {

using namespace carplan;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitPlanner = 2;

int exit_code_for(const Error& err) {
  switch (err.code) {
    case Errc::parse_error:
    case Errc::invalid_argument:
      return kExitInput;
    default:
      return kExitPlanner;
  }
}

int fail(const Error& err) {
  std::fprintf(stderr, "error: %s\n", err.describe().c_str());
  return exit_code_for(err);
}

double now_ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

Result<std::vector<double>> parse_csv_numbers(const std::string& text,
                                              std::size_t expected,
                                              const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      return Result<std::vector<double>>(
          Errc::invalid_argument,
          what + ": cannot parse number '" + item + "' in '" + text + "'");
    }
  }
  if (out.size() != expected) {
    return Result<std::vector<double>>(
        Errc::invalid_argument, what + ": expected " + std::to_string(expected) +
                                    " comma-separated numbers, got " +
                                    std::to_string(out.size()));
  }
  return out;
}

Result<Pose> parse_pose(const std::string& text, const std::string& what) {
  auto nums = parse_csv_numbers(text, 3, what);
  if (!nums.ok()) return Result<Pose>(nums.error());
  const auto& v = nums.value();
  return Pose{v[0], v[1], v[2] * kPi / 180.0};
}

/// All knobs shared by plan/hybridize/bench, with spec defaults.
struct PlannerArgs {
  std::string scene_file;
  std::string start_text = "0,0,0";
  std::string goal_text = "0,0,0";
  std::uint64_t seed = 0;
  int samples = 500;
  int neighbors = 8;
  int k = 6;
  std::string weights_text = "1,0,0,0";
  std::string radius_mode_text = "fixed-min";
  bool allow_reverse = false;
  bool conservative = false;
  int attach_fanout = 10;
  int bridge_fanout = 5;
  double bridge_radius = 0.0;

  Result<QualitySpec> quality_spec() const {
    auto nums = parse_csv_numbers(weights_text, 4, "--weights");
    if (!nums.ok()) return Result<QualitySpec>(nums.error());
    const auto& w = nums.value();
    QualitySpec spec;
    spec.w_length = w[0];
    spec.w_smoothness = w[1];
    spec.w_clearance = w[2];
    spec.w_reversals = w[3];
    for (double x : w) {
      if (x < 0.0) {
        return Result<QualitySpec>(Errc::invalid_argument,
                                   "--weights: weights must be >= 0");
      }
    }
    if (w[0] + w[1] + w[2] + w[3] <= 0.0) {
      return Result<QualitySpec>(Errc::invalid_argument,
                                 "--weights: at least one weight must be > 0");
    }
    return spec;
  }

  Result<RadiusMode> radius_mode() const {
    if (radius_mode_text == "fixed-min") return RadiusMode::fixed_min;
    if (radius_mode_text == "max-fit") return RadiusMode::max_fit;
    return Result<RadiusMode>(Errc::invalid_argument,
                              "--radius-mode: expected fixed-min or max-fit");
  }

  ConnectConfig connect_config(const Scene& scene) const {
    ConnectConfig cc;
    cc.min_turn_radius = scene.car.min_turn_radius;
    cc.allow_reverse = allow_reverse;
    return cc;
  }

  ordered_json config_json(const Scene& scene) const {
    const SweepCheckConfig sweep = SweepCheckConfig::for_scene(scene, conservative);
    return ordered_json{{"seed", seed},
                        {"samples", samples},
                        {"neighbors", neighbors},
                        {"k", k},
                        {"weights", weights_text},
                        {"radius_mode", radius_mode_text},
                        {"allow_reverse", allow_reverse},
                        {"conservative", conservative},
                        {"attach_fanout", attach_fanout},
                        {"bridge_fanout", bridge_fanout},
                        {"bridge_radius", bridge_radius},
                        {"sweep_step", sweep.step},
                        {"sweep_margin", sweep.margin}};
  }
};

void add_planner_options(CLI::App* cmd, PlannerArgs& args, bool with_k) {
  cmd->add_option("--scene", args.scene_file, "Scene JSON file")
      ->required()
      ->envname("CARPLAN_SCENE");
  cmd->add_option("--start", args.start_text, "Start pose x,y,theta_deg")
      ->required()
      ->envname("CARPLAN_START");
  cmd->add_option("--goal", args.goal_text, "Goal pose x,y,theta_deg")
      ->required()
      ->envname("CARPLAN_GOAL");
  cmd->add_option("--seed", args.seed, "Random seed (hybridize: seed base)")
      ->envname("CARPLAN_SEED");
  cmd->add_option("--samples", args.samples, "Control roadmap samples")
      ->envname("CARPLAN_SAMPLES");
  cmd->add_option("--neighbors", args.neighbors, "kNN degree of the control roadmap")
      ->envname("CARPLAN_NEIGHBORS");
  if (with_k) {
    cmd->add_option("--k", args.k, "Number of planner runs to hybridize")
        ->envname("CARPLAN_K");
  }
  cmd->add_option("--weights", args.weights_text,
                  "Quality weights wl,ws,wc,wr (length, smoothness, clearance, reversals)")
      ->envname("CARPLAN_WEIGHTS");
  cmd->add_option("--radius-mode", args.radius_mode_text,
                  "Fillet radius rule: fixed-min or max-fit")
      ->envname("CARPLAN_RADIUS_MODE");
  cmd->add_flag("--allow-reverse", args.allow_reverse,
                "Let the local planner use reverse gear")
      ->envname("CARPLAN_ALLOW_REVERSE");
  cmd->add_flag("--conservative", args.conservative,
                "Sound collision mode: inflate obstacles by the sampling bound")
      ->envname("CARPLAN_CONSERVATIVE");
  cmd->add_option("--attach-fanout", args.attach_fanout,
                  "Query pose attachment fan-out (links per side)")
      ->envname("CARPLAN_ATTACH_FANOUT");
  cmd->add_option("--bridge-fanout", args.bridge_fanout,
                  "Hybridization bridge candidates per node")
      ->envname("CARPLAN_BRIDGE_FANOUT");
  cmd->add_option("--bridge-radius", args.bridge_radius,
                  "Bridge candidate radius (<=0: 0.25 x bounds diagonal)")
      ->envname("CARPLAN_BRIDGE_RADIUS");
}

void print_cost(const char* label, const CostBreakdown& c) {
  std::printf(
      "%s length=%.6f smoothness=%.6f clearance_cost=%.6f reversals=%d "
      "min_clearance=%.6f total=%.6f\n",
      label, c.length, c.smoothness, c.clearance_cost, c.reversal_count,
      c.min_clearance, c.total);
}

/// Single C-PRM run as a closure, shared by plan, hybridize and bench.
PlannerFn make_planner(const Scene& scene, const PlannerArgs& args,
                       const Pose& start, const Pose& goal,
                       const QualitySpec& spec, RadiusMode radius_mode,
                       const SweepCheckConfig& sweep,
                       QueryResult* last_result = nullptr) {
  return [=, &scene](std::uint64_t seed) -> Result<CarPath> {
    PrmConfig pc;
    pc.num_samples = args.samples;
    pc.num_neighbors = args.neighbors;
    pc.seed = seed;
    auto rm = build_control_roadmap(scene, pc);
    if (!rm.ok()) return Result<CarPath>(rm.error());
    const ApproxRoadmap arm = build_approx_roadmap(rm.value(), scene, radius_mode);
    QueryOptions qo;
    qo.attach_fanout = args.attach_fanout;
    qo.connect = args.connect_config(scene);
    auto qr = query(arm, scene, start, goal, sweep, spec, qo);
    if (!qr.ok()) return Result<CarPath>(qr.error());
    if (last_result != nullptr) *last_result = qr.value();
    return std::move(qr.value().path);
  };
}

const std::vector<std::string>& palette() {
  static const std::vector<std::string> colors = {
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
      "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return colors;
}

struct LoadedScene {
  Scene scene;
  std::string raw;
};

Result<LoadedScene> load_scene_with_raw(const std::string& path) {
  auto text = read_text_file(path);
  if (!text.ok()) return Result<LoadedScene>(text.error());
  auto scene = scene_from_json_text(text.value(), path);
  if (!scene.ok()) return Result<LoadedScene>(scene.error());
  return LoadedScene{std::move(scene.value()), std::move(text.value())};
}

// --- plan ------------------------------------------------------------------

int cmd_plan(const PlannerArgs& args, const std::string& out_file,
             const std::string& svg_file) {
  const auto t0 = std::chrono::steady_clock::now();
  auto loaded = load_scene_with_raw(args.scene_file);
  if (!loaded.ok()) return fail(loaded.error());
  const Scene& scene = loaded.value().scene;

  auto start = parse_pose(args.start_text, "--start");
  if (!start.ok()) return fail(start.error());
  auto goal = parse_pose(args.goal_text, "--goal");
  if (!goal.ok()) return fail(goal.error());
  auto spec = args.quality_spec();
  if (!spec.ok()) return fail(spec.error());
  auto mode = args.radius_mode();
  if (!mode.ok()) return fail(mode.error());
  const SweepCheckConfig sweep = SweepCheckConfig::for_scene(scene, args.conservative);

  if (pose_in_collision(scene, start.value(), sweep.margin)) {
    return fail(Error{Errc::in_collision, "start pose is in collision"});
  }
  if (pose_in_collision(scene, goal.value(), sweep.margin)) {
    return fail(Error{Errc::in_collision, "goal pose is in collision"});
  }

  QueryResult result;
  PlannerFn planner = make_planner(scene, args, start.value(), goal.value(),
                                   spec.value(), mode.value(), sweep, &result);
  auto planned = planner(args.seed);
  if (!planned.ok()) return fail(planned.error());

  const std::string path_json =
      path_to_json(planned.value(), result.cost).dump(2) + "\n";
  if (auto w = write_text_file(out_file, path_json); !w.ok()) return fail(w.error());

  RunManifest manifest;
  manifest.command_line = "carplan plan";
  manifest.config = args.config_json(scene);
  manifest.add_input(args.scene_file, loaded.value().raw);
  manifest.outputs.push_back(out_file);

  if (!svg_file.empty()) {
    const std::string svg =
        render_svg(scene, {planned.value()}, {SvgPathStyle{palette()[0], 0.08}});
    if (auto w = write_text_file(svg_file, svg); !w.ok()) return fail(w.error());
    manifest.outputs.push_back(svg_file);
  }

  std::printf("path: %zu primitives, validated=%s\n",
              planned.value().primitives.size(),
              result.validated ? "true" : "false");
  print_cost("cost:", result.cost);
  std::printf("stats: edges_checked=%zu discarded=%zu replans=%zu wall_ms=%.1f\n",
              result.stats.edges_checked, result.stats.edges_discarded,
              result.stats.replans, result.stats.wall_ms);

  manifest.timings["total_ms"] = now_ms_since(t0);
  manifest.timings["query_ms"] = result.stats.wall_ms;
  if (auto w = write_manifest(manifest, out_file); !w.ok()) return fail(w.error());
  std::printf("wrote %s\n", out_file.c_str());
  return kExitOk;
}

// --- hybridize ---------------------------------------------------------------

int cmd_hybridize(const PlannerArgs& args, const std::string& out_file,
                  const std::string& svg_file, const std::string& report_file,
                  const std::string& dump_hgraph_file) {
  const auto t0 = std::chrono::steady_clock::now();
  auto loaded = load_scene_with_raw(args.scene_file);
  if (!loaded.ok()) return fail(loaded.error());
  const Scene& scene = loaded.value().scene;

  auto start = parse_pose(args.start_text, "--start");
  if (!start.ok()) return fail(start.error());
  auto goal = parse_pose(args.goal_text, "--goal");
  if (!goal.ok()) return fail(goal.error());
  auto spec = args.quality_spec();
  if (!spec.ok()) return fail(spec.error());
  auto mode = args.radius_mode();
  if (!mode.ok()) return fail(mode.error());
  const SweepCheckConfig sweep = SweepCheckConfig::for_scene(scene, args.conservative);

  if (pose_in_collision(scene, start.value(), sweep.margin)) {
    return fail(Error{Errc::in_collision, "start pose is in collision"});
  }
  if (pose_in_collision(scene, goal.value(), sweep.margin)) {
    return fail(Error{Errc::in_collision, "goal pose is in collision"});
  }

  PlannerFn planner = make_planner(scene, args, start.value(), goal.value(),
                                   spec.value(), mode.value(), sweep);
  HybridizeConfig hc;
  hc.k = args.k;
  hc.seed_base = args.seed;
  hc.bridge_fanout = args.bridge_fanout;
  hc.bridge_radius = args.bridge_radius;
  auto hybrid = hybridize(planner, scene, start.value(), goal.value(),
                          spec.value(), hc, args.connect_config(scene), sweep);
  if (!hybrid.ok()) return fail(hybrid.error());
  const HybridizeResult& res = hybrid.value();

  const std::string path_json =
      path_to_json(res.path, res.report.hybrid_cost).dump(2) + "\n";
  if (auto w = write_text_file(out_file, path_json); !w.ok()) return fail(w.error());
  const std::string report_json = report_to_json(res.report).dump(2) + "\n";
  if (auto w = write_text_file(report_file, report_json); !w.ok()) return fail(w.error());

  RunManifest manifest;
  manifest.command_line = "carplan hybridize";
  manifest.config = args.config_json(scene);
  manifest.add_input(args.scene_file, loaded.value().raw);
  manifest.outputs.push_back(out_file);
  manifest.outputs.push_back(report_file);

  if (!svg_file.empty()) {
    // Overlay: the k inputs in palette strokes, the hybrid emphasized.
    std::vector<CarPath> paths = res.input_paths;
    std::vector<SvgPathStyle> styles;
    for (std::size_t i = 0; i < paths.size(); ++i) {
      styles.push_back(SvgPathStyle{palette()[i % palette().size()], 0.06});
    }
    paths.push_back(res.path);
    styles.push_back(SvgPathStyle{"#000000", 0.14});
    const std::string svg = render_svg(scene, paths, styles);
    if (auto w = write_text_file(svg_file, svg); !w.ok()) return fail(w.error());
    manifest.outputs.push_back(svg_file);
  }
  if (!dump_hgraph_file.empty()) {
    const std::string dump = hgraph_to_json(res.graph).dump(2) + "\n";
    if (auto w = write_text_file(dump_hgraph_file, dump); !w.ok()) return fail(w.error());
    manifest.outputs.push_back(dump_hgraph_file);
  }

  std::printf("%-12s %-10s %-12s %-12s %-10s %-8s\n", "run", "seed", "length",
              "smoothness", "reversals", "total");
  double best_total = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < res.report.runs.size(); ++i) {
    const RunReport& run = res.report.runs[i];
    if (run.ok) {
      std::printf("%-12zu %-10llu %-12.6f %-12.6f %-10d %-8.6f\n", i,
                  static_cast<unsigned long long>(run.seed), run.cost.length,
                  run.cost.smoothness, run.cost.reversal_count, run.cost.total);
      best_total = std::min(best_total, run.cost.total);
    } else {
      std::printf("%-12zu %-10llu failed: %s\n", i,
                  static_cast<unsigned long long>(run.seed), run.error.c_str());
    }
  }
  print_cost("hybrid:", res.report.hybrid_cost);
  if (std::isfinite(best_total) && best_total > 0.0) {
    std::printf("improvement over best input: %.4f%%\n",
                100.0 * (best_total - res.report.hybrid_cost.total) / best_total);
  }
  std::printf("bridges: attempted=%zu geometric_failures=%zu "
              "collision_failures=%zu inserted=%zu\n",
              res.report.bridges.attempted,
              res.report.bridges.geometric_failures,
              res.report.bridges.collision_failures,
              res.report.bridges.inserted);

  manifest.timings["total_ms"] = now_ms_since(t0);
  manifest.timings["hybridize_ms"] = res.report.wall_ms_total;
  if (auto w = write_manifest(manifest, out_file); !w.ok()) return fail(w.error());
  std::printf("wrote %s and %s\n", out_file.c_str(), report_file.c_str());
  return kExitOk;
}

// --- cost --------------------------------------------------------------------

int cmd_cost(const std::string& scene_file, const std::string& path_file,
             const std::string& weights_text, const std::string& out_file) {
  auto loaded = load_scene_with_raw(scene_file);
  if (!loaded.ok()) return fail(loaded.error());
  auto text = read_text_file(path_file);
  if (!text.ok()) return fail(text.error());
  auto doc = path_from_json_text(text.value(), path_file);
  if (!doc.ok()) return fail(doc.error());

  PlannerArgs args;
  args.weights_text = weights_text;
  auto spec = args.quality_spec();
  if (!spec.ok()) return fail(spec.error());

  auto cost = path_cost(doc.value().path, loaded.value().scene, spec.value());
  if (!cost.ok()) return fail(cost.error());
  const std::string cost_json = cost_to_json(cost.value()).dump(2) + "\n";
  std::fputs(cost_json.c_str(), stdout);
  if (!out_file.empty()) {
    if (auto w = write_text_file(out_file, cost_json); !w.ok()) return fail(w.error());
    RunManifest manifest;
    manifest.command_line = "carplan cost";
    manifest.config = ordered_json{{"weights", weights_text}};
    manifest.add_input(scene_file, loaded.value().raw);
    manifest.add_input(path_file, text.value());
    manifest.outputs.push_back(out_file);
    if (auto w = write_manifest(manifest, out_file); !w.ok()) return fail(w.error());
  }
  return kExitOk;
}

// --- render --------------------------------------------------------------------

int cmd_render(const std::string& scene_file,
               const std::vector<std::string>& path_files,
               const std::string& svg_file) {
  auto loaded = load_scene_with_raw(scene_file);
  if (!loaded.ok()) return fail(loaded.error());
  const Scene& scene = loaded.value().scene;

  RunManifest manifest;
  manifest.command_line = "carplan render";
  manifest.add_input(scene_file, loaded.value().raw);

  std::vector<CarPath> paths;
  std::vector<SvgPathStyle> styles;
  for (std::size_t i = 0; i < path_files.size(); ++i) {
    auto text = read_text_file(path_files[i]);
    if (!text.ok()) return fail(text.error());
    auto doc = path_from_json_text(text.value(), path_files[i]);
    if (!doc.ok()) return fail(doc.error());
    manifest.add_input(path_files[i], text.value());

    bool out_of_bounds = false;
    const CarPath& path = doc.value().path;
    for (const MotionPrimitive& prim : path.primitives) {
      const double len = prim.length();
      for (double s : {0.0, 0.5 * len, len}) {
        if (!scene.bounds.contains(prim.pose_at(s).position)) out_of_bounds = true;
      }
    }
    if (out_of_bounds) {
      std::fprintf(stderr, "warning: %s leaves the scene bounds\n",
                   path_files[i].c_str());
    }
    paths.push_back(doc.value().path);
    styles.push_back(SvgPathStyle{palette()[i % palette().size()], 0.08});
  }

  const std::string svg = render_svg(scene, paths, styles);
  if (auto w = write_text_file(svg_file, svg); !w.ok()) return fail(w.error());
  manifest.outputs.push_back(svg_file);
  if (auto w = write_manifest(manifest, svg_file); !w.ok()) return fail(w.error());
  std::printf("wrote %s\n", svg_file.c_str());
  return kExitOk;
}

// --- bench --------------------------------------------------------------------

struct BenchRow {
  std::string scene;
  std::size_t ok_reps = 0;
  std::size_t failed_reps = 0;
  std::vector<double> build_ms;
  std::vector<double> query_ms;
  std::vector<double> hybridize_ms;
  std::vector<double> improvement_pct;  ///< hybrid vs best input, <= 0 is better
};

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double p95_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto idx = static_cast<std::size_t>(
      std::ceil(0.95 * static_cast<double>(v.size()))) - 1;
  return v[std::min(idx, v.size() - 1)];
}

int cmd_bench(const PlannerArgs& args_in, const std::string& scene_dir,
              int reps, const std::string& out_file, bool have_start,
              bool have_goal) {
  namespace fs = std::filesystem;
  std::vector<std::string> scene_files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(scene_dir, ec)) {
    if (entry.path().extension() == ".json") {
      scene_files.push_back(entry.path().string());
    }
  }
  if (ec) {
    return fail(Error{Errc::invalid_argument,
                      "cannot read scene directory " + scene_dir});
  }
  std::sort(scene_files.begin(), scene_files.end());
  if (scene_files.empty()) {
    return fail(Error{Errc::invalid_argument,
                      "no .json scenes in " + scene_dir});
  }

  std::vector<BenchRow> rows;
  for (const std::string& file : scene_files) {
    BenchRow row;
    row.scene = fs::path(file).filename().string();
    auto loaded = load_scene_with_raw(file);
    if (!loaded.ok()) {
      std::fprintf(stderr, "bench: %s: %s\n", file.c_str(),
                   loaded.error().describe().c_str());
      row.failed_reps = static_cast<std::size_t>(reps);
      rows.push_back(row);
      continue;
    }
    const Scene& scene = loaded.value().scene;
    PlannerArgs args = args_in;
    // Default query: left-center to right-center, facing +x.
    Pose start{scene.bounds.xmin + 0.1 * scene.bounds.width(),
               scene.bounds.ymin + 0.5 * scene.bounds.height(), 0.0};
    Pose goal{scene.bounds.xmin + 0.9 * scene.bounds.width(),
              scene.bounds.ymin + 0.5 * scene.bounds.height(), 0.0};
    if (have_start) {
      auto p = parse_pose(args.start_text, "--start");
      if (!p.ok()) return fail(p.error());
      start = p.value();
    }
    if (have_goal) {
      auto p = parse_pose(args.goal_text, "--goal");
      if (!p.ok()) return fail(p.error());
      goal = p.value();
    }
    auto spec = args.quality_spec();
    if (!spec.ok()) return fail(spec.error());
    auto mode = args.radius_mode();
    if (!mode.ok()) return fail(mode.error());
    const SweepCheckConfig sweep = SweepCheckConfig::for_scene(scene, args.conservative);

    for (int rep = 0; rep < reps; ++rep) {
      const std::uint64_t seed_base =
          args.seed + static_cast<std::uint64_t>(rep) *
                          static_cast<std::uint64_t>(std::max(1, args.k));
      // Timed single run (build + query split out).
      PrmConfig pc;
      pc.num_samples = args.samples;
      pc.num_neighbors = args.neighbors;
      pc.seed = seed_base;
      const auto tb = std::chrono::steady_clock::now();
      auto rm = build_control_roadmap(scene, pc);
      if (!rm.ok()) {
        ++row.failed_reps;
        continue;
      }
      const ApproxRoadmap arm = build_approx_roadmap(rm.value(), scene, mode.value());
      const double build_ms = now_ms_since(tb);
      QueryOptions qo;
      qo.attach_fanout = args.attach_fanout;
      qo.connect = args.connect_config(scene);
      const auto tq = std::chrono::steady_clock::now();
      auto qr = query(arm, scene, start, goal, sweep, spec.value(), qo);
      const double query_ms = now_ms_since(tq);
      if (!qr.ok()) {
        ++row.failed_reps;
        continue;
      }

      PlannerFn planner = make_planner(scene, args, start, goal, spec.value(),
                                       mode.value(), sweep);
      HybridizeConfig hc;
      hc.k = args.k;
      hc.seed_base = seed_base;
      hc.bridge_fanout = args.bridge_fanout;
      hc.bridge_radius = args.bridge_radius;
      const auto th = std::chrono::steady_clock::now();
      auto hybrid = hybridize(planner, scene, start, goal, spec.value(), hc,
                              args.connect_config(scene), sweep);
      const double hybridize_ms = now_ms_since(th);
      if (!hybrid.ok()) {
        ++row.failed_reps;
        continue;
      }
      double best_total = std::numeric_limits<double>::infinity();
      for (const RunReport& run : hybrid.value().report.runs) {
        if (run.ok) best_total = std::min(best_total, run.cost.total);
      }
      row.build_ms.push_back(build_ms);
      row.query_ms.push_back(query_ms);
      row.hybridize_ms.push_back(hybridize_ms);
      row.improvement_pct.push_back(
          100.0 * (hybrid.value().report.hybrid_cost.total - best_total) /
          best_total);
      ++row.ok_reps;
    }
    rows.push_back(row);
  }

  std::printf("%-22s %-5s %-18s %-18s %-20s %-12s\n", "scene", "ok",
              "build ms (mean/p95)", "query ms (mean/p95)",
              "hybridize ms (mean/p95)", "improve %");
  std::string csv =
      "scene,ok_reps,failed_reps,build_ms_mean,build_ms_p95,query_ms_mean,"
      "query_ms_p95,hybridize_ms_mean,hybridize_ms_p95,improvement_pct_mean\n";
  bool any_ok = false;
  for (const BenchRow& row : rows) {
    if (row.ok_reps > 0) any_ok = true;
    std::printf("%-22s %zu/%-3zu %8.1f/%-9.1f %8.1f/%-9.1f %9.1f/%-10.1f %8.3f\n",
                row.scene.c_str(), row.ok_reps, row.ok_reps + row.failed_reps,
                mean_of(row.build_ms), p95_of(row.build_ms),
                mean_of(row.query_ms), p95_of(row.query_ms),
                mean_of(row.hybridize_ms), p95_of(row.hybridize_ms),
                mean_of(row.improvement_pct));
    char line[512];
    std::snprintf(line, sizeof(line), "%s,%zu,%zu,%.3f,%.3f,%.3f,%.3f,%.3f,%.3f,%.6f\n",
                  row.scene.c_str(), row.ok_reps, row.failed_reps,
                  mean_of(row.build_ms), p95_of(row.build_ms),
                  mean_of(row.query_ms), p95_of(row.query_ms),
                  mean_of(row.hybridize_ms), p95_of(row.hybridize_ms),
                  mean_of(row.improvement_pct));
    csv += line;
  }
  if (!out_file.empty()) {
    if (auto w = write_text_file(out_file, csv); !w.ok()) return fail(w.error());
    RunManifest manifest;
    manifest.command_line = "carplan bench";
    manifest.config = ordered_json{{"scenes", scene_dir},
                                   {"reps", reps},
                                   {"samples", args_in.samples},
                                   {"neighbors", args_in.neighbors},
                                   {"k", args_in.k},
                                   {"seed", args_in.seed},
                                   {"weights", args_in.weights_text}};
    manifest.outputs.push_back(out_file);
    if (auto w = write_manifest(manifest, out_file); !w.ok()) return fail(w.error());
  }
  return any_ok ? kExitOk : kExitPlanner;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"carplan: C-PRM planning and path hybridization for car-like robots"};
  app.set_version_flag("--version", std::string("carplan ") + kVersionString);
  app.require_subcommand(1);

  PlannerArgs plan_args;
  std::string plan_out = "path.json";
  std::string plan_svg;
  auto* plan_cmd = app.add_subcommand("plan", "Run the C-PRM planner once");
  add_planner_options(plan_cmd, plan_args, false);
  plan_cmd->add_option("--out", plan_out, "Path JSON output file")
      ->envname("CARPLAN_OUT");
  plan_cmd->add_option("--svg", plan_svg, "Optional SVG rendering");

  PlannerArgs hy_args;
  std::string hy_out = "hybrid.json";
  std::string hy_svg;
  std::string hy_report = "report.json";
  std::string hy_dump;
  auto* hy_cmd = app.add_subcommand(
      "hybridize", "Run the planner k times and fuse the paths");
  add_planner_options(hy_cmd, hy_args, true);
  hy_cmd->add_option("--out", hy_out, "Hybrid path JSON output file")
      ->envname("CARPLAN_OUT");
  hy_cmd->add_option("--svg", hy_svg, "Optional overlay SVG (inputs + hybrid)");
  hy_cmd->add_option("--report", hy_report, "Hybridization report JSON");
  hy_cmd->add_option("--dump-hgraph", hy_dump, "Debug dump of the H-graph");

  std::string cost_scene, cost_path, cost_out;
  std::string cost_weights = "1,0,0,0";
  auto* cost_cmd = app.add_subcommand("cost", "Evaluate a stored path's cost");
  cost_cmd->add_option("--scene", cost_scene, "Scene JSON file")
      ->required()
      ->envname("CARPLAN_SCENE");
  cost_cmd->add_option("--path", cost_path, "Path JSON file")->required();
  cost_cmd->add_option("--weights", cost_weights, "Quality weights wl,ws,wc,wr")
      ->envname("CARPLAN_WEIGHTS");
  cost_cmd->add_option("--out", cost_out, "Write the cost breakdown here too");

  std::string render_scene, render_svg_file = "scene.svg";
  std::vector<std::string> render_paths;
  auto* render_cmd = app.add_subcommand("render", "Render scene and paths to SVG");
  render_cmd->add_option("--scene", render_scene, "Scene JSON file")
      ->required()
      ->envname("CARPLAN_SCENE");
  render_cmd->add_option("paths", render_paths, "Path JSON files to draw");
  render_cmd->add_option("--svg", render_svg_file, "SVG output file");

  PlannerArgs bench_args;
  std::string bench_dir = "scenes";
  std::string bench_out;
  int bench_reps = 3;
  auto* bench_cmd = app.add_subcommand("bench", "Benchmark plan and hybridize");
  add_planner_options(bench_cmd, bench_args, true);
  // bench derives start/goal from each scene's bounds unless given.
  for (auto* opt : {bench_cmd->get_option("--scene"),
                    bench_cmd->get_option("--start"),
                    bench_cmd->get_option("--goal")}) {
    opt->required(false);
  }
  bench_cmd->get_option("--scene")->group("");  // scenes come from --scenes
  bench_cmd->add_option("--scenes", bench_dir, "Directory of scene JSON files")
      ->envname("CARPLAN_SCENES");
  bench_cmd->add_option("--reps", bench_reps, "Repetitions per scene");
  bench_cmd->add_option("--out", bench_out, "CSV output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return kExitInput;
  }

  if (plan_cmd->parsed()) return cmd_plan(plan_args, plan_out, plan_svg);
  if (hy_cmd->parsed()) {
    return cmd_hybridize(hy_args, hy_out, hy_svg, hy_report, hy_dump);
  }
  if (cost_cmd->parsed()) {
    return cmd_cost(cost_scene, cost_path, cost_weights, cost_out);
  }
  if (render_cmd->parsed()) {
    return cmd_render(render_scene, render_paths, render_svg_file);
  }
  if (bench_cmd->parsed()) {
    return cmd_bench(bench_args, bench_dir, bench_reps, bench_out,
                     bench_cmd->get_option("--start")->count() > 0,
                     bench_cmd->get_option("--goal")->count() > 0);
  }
  return kExitInput;
}
