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

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "carplan/hybridizer.hpp"
#include "carplan/quality.hpp"
#include "carplan/scene.hpp"

namespace carplan {

/// Insertion-ordered JSON keeps emitted files diffable: identical inputs
/// serialize to identical bytes (nlohmann prints doubles with shortest
/// round-trip formatting).
using ordered_json = nlohmann::ordered_json;

inline Result<std::string> read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return Result<std::string>(Errc::parse_error, "cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Result<void> write_text_file(const std::string& path,
                                    const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return Result<void>(Errc::parse_error, "cannot open " + path +
                                               " for writing");
  }
  out << content;
  if (!out) {
    return Result<void>(Errc::parse_error, "write failed: " + path);
  }
  return {};
}

namespace detail {

/// 1-based line of a byte offset, for parse diagnostics.
inline std::size_t line_of_offset(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

inline Result<double> require_number(const ordered_json& obj,
                                     const std::string& context,
                                     const std::string& field) {
  if (!obj.contains(field) || !obj[field].is_number()) {
    return Result<double>(Errc::parse_error,
                          context + ": missing or non-numeric field '" +
                              field + "'");
  }
  return obj[field].get<double>();
}

}  // namespace detail

// --- Scene ---------------------------------------------------------------

inline Result<Scene> scene_from_json_text(const std::string& text,
                                          const std::string& origin = "scene") {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    return Result<Scene>(
        Errc::parse_error,
        origin + " line " + std::to_string(detail::line_of_offset(text, e.byte)) +
            ": " + e.what());
  }
  if (!doc.is_object()) {
    return Result<Scene>(Errc::parse_error, origin + ": top level must be an object");
  }

  Scene scene;
  if (!doc.contains("bounds") || !doc["bounds"].is_object()) {
    return Result<Scene>(Errc::parse_error, origin + ": missing object field 'bounds'");
  }
  for (auto [field, target] : {std::pair{"xmin", &scene.bounds.xmin},
                               std::pair{"ymin", &scene.bounds.ymin},
                               std::pair{"xmax", &scene.bounds.xmax},
                               std::pair{"ymax", &scene.bounds.ymax}}) {
    auto v = detail::require_number(doc["bounds"], origin + ": bounds", field);
    if (!v.ok()) return Result<Scene>(v.error());
    *target = v.value();
  }
  if (!(scene.bounds.width() > 0.0) || !(scene.bounds.height() > 0.0)) {
    return Result<Scene>(Errc::parse_error,
                         origin + ": bounds: degenerate rectangle");
  }

  if (!doc.contains("car") || !doc["car"].is_object()) {
    return Result<Scene>(Errc::parse_error, origin + ": missing object field 'car'");
  }
  for (auto [field, target] :
       {std::pair{"length", &scene.car.length},
        std::pair{"width", &scene.car.width},
        std::pair{"ref_offset", &scene.car.ref_offset},
        std::pair{"min_turn_radius", &scene.car.min_turn_radius}}) {
    auto v = detail::require_number(doc["car"], origin + ": car", field);
    if (!v.ok()) return Result<Scene>(v.error());
    *target = v.value();
  }
  if (auto v = scene.car.validate(); !v.ok()) {
    return Result<Scene>(Errc::parse_error,
                         origin + ": car: " + v.error().message);
  }

  if (doc.contains("obstacles")) {
    if (!doc["obstacles"].is_array()) {
      return Result<Scene>(Errc::parse_error,
                           origin + ": 'obstacles' must be an array");
    }
    std::size_t index = 0;
    for (const auto& poly : doc["obstacles"]) {
      const std::string ctx =
          origin + ": obstacles[" + std::to_string(index) + "]";
      if (!poly.is_array()) {
        return Result<Scene>(Errc::parse_error, ctx + ": must be an array of [x,y]");
      }
      std::vector<Point> pts;
      for (const auto& v : poly) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
            !v[1].is_number()) {
          return Result<Scene>(Errc::parse_error,
                               ctx + ": vertex must be a [x,y] number pair");
        }
        pts.push_back(Point{v[0].get<double>(), v[1].get<double>()});
      }
      auto made = Polygon::make(std::move(pts));
      if (!made.ok()) {
        return Result<Scene>(Errc::parse_error,
                             ctx + ": " + made.error().message);
      }
      scene.obstacles.push_back(std::move(made.value()));
      ++index;
    }
  }
  return scene;
}

inline Result<Scene> load_scene(const std::string& path) {
  auto text = read_text_file(path);
  if (!text.ok()) return Result<Scene>(text.error());
  return scene_from_json_text(text.value(), path);
}

inline ordered_json scene_to_json(const Scene& scene) {
  ordered_json doc;
  doc["bounds"] = {{"xmin", scene.bounds.xmin},
                   {"ymin", scene.bounds.ymin},
                   {"xmax", scene.bounds.xmax},
                   {"ymax", scene.bounds.ymax}};
  doc["car"] = {{"length", scene.car.length},
                {"width", scene.car.width},
                {"ref_offset", scene.car.ref_offset},
                {"min_turn_radius", scene.car.min_turn_radius}};
  doc["obstacles"] = ordered_json::array();
  for (const Polygon& poly : scene.obstacles) {
    ordered_json verts = ordered_json::array();
    for (const Point& p : poly.vertices()) {
      verts.push_back(ordered_json::array({p.x, p.y}));
    }
    doc["obstacles"].push_back(std::move(verts));
  }
  return doc;
}

// --- Paths ---------------------------------------------------------------

inline ordered_json cost_to_json(const CostBreakdown& cost) {
  return ordered_json{{"length", cost.length},
                      {"smoothness", cost.smoothness},
                      {"clearance_cost", cost.clearance_cost},
                      {"reversal_count", cost.reversal_count},
                      {"min_clearance", cost.min_clearance},
                      {"total", cost.total}};
}

inline Result<CostBreakdown> cost_from_json(const ordered_json& doc,
                                            const std::string& context) {
  CostBreakdown cost;
  for (auto [field, target] :
       {std::pair{"length", &cost.length},
        std::pair{"smoothness", &cost.smoothness},
        std::pair{"clearance_cost", &cost.clearance_cost},
        std::pair{"min_clearance", &cost.min_clearance},
        std::pair{"total", &cost.total}}) {
    auto v = detail::require_number(doc, context, field);
    if (!v.ok()) return Result<CostBreakdown>(v.error());
    *target = v.value();
  }
  auto rc = detail::require_number(doc, context, "reversal_count");
  if (!rc.ok()) return Result<CostBreakdown>(rc.error());
  cost.reversal_count = static_cast<int>(rc.value());
  return cost;
}

inline ordered_json path_to_json(const CarPath& path,
                                 std::optional<CostBreakdown> cost = {}) {
  ordered_json doc;
  doc["start"] = {{"x", path.start.position.x},
                  {"y", path.start.position.y},
                  {"theta", path.start.heading}};
  doc["primitives"] = ordered_json::array();
  for (const MotionPrimitive& prim : path.primitives) {
    ordered_json p;
    p["kind"] = prim.is_arc() ? "arc" : "straight";
    p["direction"] = prim.reverse() ? "reverse" : "forward";
    if (prim.is_arc()) {
      const Arc& a = prim.arc();
      p["center"] = {{"x", a.center.x}, {"y", a.center.y}};
      p["radius"] = a.radius;
      p["start_angle"] = a.start_angle;
      p["sweep"] = a.sweep;
    } else {
      const Segment& s = prim.segment();
      p["start"] = {{"x", s.start.x}, {"y", s.start.y}};
      p["end"] = {{"x", s.end.x}, {"y", s.end.y}};
    }
    doc["primitives"].push_back(std::move(p));
  }
  if (cost.has_value()) doc["cost_breakdown"] = cost_to_json(*cost);
  return doc;
}

struct PathDocument {
  CarPath path;
  std::optional<CostBreakdown> cost;
};

inline Result<PathDocument> path_from_json_text(
    const std::string& text, const std::string& origin = "path") {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    return Result<PathDocument>(
        Errc::parse_error,
        origin + " line " + std::to_string(detail::line_of_offset(text, e.byte)) +
            ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("start") || !doc["start"].is_object()) {
    return Result<PathDocument>(Errc::parse_error,
                                origin + ": missing object field 'start'");
  }
  PathDocument out;
  {
    double x = 0.0, y = 0.0, theta = 0.0;
    for (auto [field, target] : {std::pair{"x", &x}, std::pair{"y", &y},
                                 std::pair{"theta", &theta}}) {
      auto v = detail::require_number(doc["start"], origin + ": start", field);
      if (!v.ok()) return Result<PathDocument>(v.error());
      *target = v.value();
    }
    out.path.start = Pose{x, y, theta};
  }
  if (!doc.contains("primitives") || !doc["primitives"].is_array()) {
    return Result<PathDocument>(Errc::parse_error,
                                origin + ": missing array field 'primitives'");
  }
  std::size_t index = 0;
  for (const auto& p : doc["primitives"]) {
    const std::string ctx =
        origin + ": primitives[" + std::to_string(index) + "]";
    if (!p.is_object() || !p.contains("kind") || !p["kind"].is_string()) {
      return Result<PathDocument>(Errc::parse_error,
                                  ctx + ": missing string field 'kind'");
    }
    const std::string kind = p["kind"].get<std::string>();
    Direction dir = Direction::forward;
    if (p.contains("direction")) {
      const std::string d = p["direction"].is_string()
                                ? p["direction"].get<std::string>()
                                : std::string();
      if (d == "reverse") {
        dir = Direction::reverse;
      } else if (d != "forward") {
        return Result<PathDocument>(
            Errc::parse_error, ctx + ": direction must be forward or reverse");
      }
    }
    if (kind == "straight") {
      double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
      if (!p.contains("start") || !p.contains("end")) {
        return Result<PathDocument>(Errc::parse_error,
                                    ctx + ": straight needs 'start' and 'end'");
      }
      for (auto [obj, fx, fy] : {std::tuple{"start", &x0, &y0},
                                 std::tuple{"end", &x1, &y1}}) {
        auto vx = detail::require_number(p[obj], ctx + ": " + obj, "x");
        auto vy = detail::require_number(p[obj], ctx + ": " + obj, "y");
        if (!vx.ok()) return Result<PathDocument>(vx.error());
        if (!vy.ok()) return Result<PathDocument>(vy.error());
        *fx = vx.value();
        *fy = vy.value();
      }
      out.path.primitives.push_back(MotionPrimitive::straight(
          Segment{Point{x0, y0}, Point{x1, y1}}, dir));
    } else if (kind == "arc") {
      if (!p.contains("center")) {
        return Result<PathDocument>(Errc::parse_error, ctx + ": arc needs 'center'");
      }
      auto cx = detail::require_number(p["center"], ctx + ": center", "x");
      auto cy = detail::require_number(p["center"], ctx + ": center", "y");
      auto radius = detail::require_number(p, ctx, "radius");
      auto start_angle = detail::require_number(p, ctx, "start_angle");
      auto sweep = detail::require_number(p, ctx, "sweep");
      for (const auto* r : {&cx, &cy, &radius, &start_angle, &sweep}) {
        if (!r->ok()) return Result<PathDocument>(r->error());
      }
      out.path.primitives.push_back(MotionPrimitive::arc(
          Arc{Point{cx.value(), cy.value()}, radius.value(),
              start_angle.value(), sweep.value()},
          dir));
    } else {
      return Result<PathDocument>(Errc::parse_error,
                                  ctx + ": unknown kind '" + kind + "'");
    }
    ++index;
  }
  if (doc.contains("cost_breakdown")) {
    auto cost = cost_from_json(doc["cost_breakdown"], origin + ": cost_breakdown");
    if (!cost.ok()) return Result<PathDocument>(cost.error());
    out.cost = cost.value();
  }
  return out;
}

inline Result<PathDocument> load_path(const std::string& path) {
  auto text = read_text_file(path);
  if (!text.ok()) return Result<PathDocument>(text.error());
  return path_from_json_text(text.value(), path);
}

// --- Hybridization report ------------------------------------------------

inline ordered_json report_to_json(const HybridizeReport& report) {
  ordered_json doc;
  doc["runs"] = ordered_json::array();
  for (const RunReport& run : report.runs) {
    ordered_json r;
    r["seed"] = run.seed;
    r["ok"] = run.ok;
    if (run.ok) {
      r["cost_breakdown"] = cost_to_json(run.cost);
    } else {
      r["error"] = run.error;
    }
    r["wall_ms"] = run.wall_ms;
    doc["runs"].push_back(std::move(r));
  }
  doc["bridges"] = {{"attempted", report.bridges.attempted},
                    {"geometric_failures", report.bridges.geometric_failures},
                    {"collision_failures", report.bridges.collision_failures},
                    {"inserted", report.bridges.inserted}};
  doc["hybrid"] = {{"cost_breakdown", cost_to_json(report.hybrid_cost)},
                   {"wall_ms_total", report.wall_ms_total}};
  doc["graph"] = {{"nodes", report.graph_nodes}, {"edges", report.graph_edges}};
  return doc;
}

/// Debug dump of the H-graph (nodes, edges with kinds), for the CLI flag.
inline ordered_json hgraph_to_json(const HGraph& g) {
  ordered_json doc;
  doc["start"] = g.start;
  doc["goal"] = g.goal;
  doc["nodes"] = ordered_json::array();
  for (const HNode& n : g.nodes) {
    doc["nodes"].push_back(ordered_json{
        {"x", n.pose.position.x},
        {"y", n.pose.position.y},
        {"theta", n.pose.heading},
        {"origin_paths", n.origin_paths}});
  }
  doc["edges"] = ordered_json::array();
  for (const HEdge& e : g.edges) {
    doc["edges"].push_back(ordered_json{
        {"from", e.from},
        {"to", e.to},
        {"kind", e.kind == HEdgeKind::bridge ? "bridge" : "original"},
        {"total", e.cost.total}});
  }
  return doc;
}

}  // namespace carplan
