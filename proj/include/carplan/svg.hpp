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

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "carplan/scene.hpp"

namespace carplan {

/// Stroke assignment for one rendered path. Reverse primitives within the
/// path are drawn dashed regardless of style.
struct SvgPathStyle {
  std::string stroke = "#1f77b4";
  double stroke_width = 0.08;  ///< world units
};

struct SvgOptions {
  double scale = 40.0;   ///< pixels per world unit
  double margin = 0.5;   ///< world-unit border around the bounds
  bool draw_glyphs = true;  ///< start/goal markers on each path
};

namespace detail {

/// Fixed 6-decimal formatting; -0 collapses to 0 so output is stable.
inline std::string svg_num(double v) {
  if (v == 0.0) v = 0.0;
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

class SvgCanvas {
 public:
  SvgCanvas(const Bounds& bounds, const SvgOptions& opts)
      : bounds_(bounds), opts_(opts) {}

  double px_width() const {
    return (bounds_.width() + 2.0 * opts_.margin) * opts_.scale;
  }
  double px_height() const {
    return (bounds_.height() + 2.0 * opts_.margin) * opts_.scale;
  }
  /// World to pixel; the y axis flips so world +y points up in the image.
  Point map(Point p) const {
    return {(p.x - bounds_.xmin + opts_.margin) * opts_.scale,
            (bounds_.ymax - p.y + opts_.margin) * opts_.scale};
  }
  double len(double world) const { return world * opts_.scale; }

 private:
  Bounds bounds_;
  SvgOptions opts_;
};

/// SVG path data for one primitive chain segment. Arcs become true A
/// commands; sweeps beyond pi are split so the small-arc flag suffices.
/// World counter-clockwise maps to SVG sweep-flag 0 under the y flip.
inline std::string primitive_path_data(const SvgCanvas& canvas,
                                       const MotionPrimitive& prim,
                                       bool with_move) {
  std::string d;
  const Point start = canvas.map(prim.is_arc() ? prim.arc().start_point()
                                               : prim.segment().start);
  if (with_move) {
    d += "M " + svg_num(start.x) + " " + svg_num(start.y);
  }
  if (prim.is_straight()) {
    const Point end = canvas.map(prim.segment().end);
    d += " L " + svg_num(end.x) + " " + svg_num(end.y);
    return d;
  }
  const Arc& arc = prim.arc();
  const int chunks =
      std::max(1, static_cast<int>(std::ceil(std::abs(arc.sweep) / kPi)));
  const double r = canvas.len(arc.radius);
  const char* sweep_flag = arc.sweep > 0.0 ? "0" : "1";
  for (int i = 1; i <= chunks; ++i) {
    const double angle =
        arc.start_angle + arc.sweep * static_cast<double>(i) /
                              static_cast<double>(chunks);
    const Point end = canvas.map(arc.point_at_angle(angle));
    d += " A " + svg_num(r) + " " + svg_num(r) + " 0 0 " + sweep_flag + " " +
         svg_num(end.x) + " " + svg_num(end.y);
  }
  return d;
}

}  // namespace detail

/// Render the scene and paths to an SVG 1.1 document. Output is a pure
/// function of the inputs: fixed element order, fixed 6-decimal numbers.
inline std::string render_svg(const Scene& scene,
                              const std::vector<CarPath>& paths,
                              const std::vector<SvgPathStyle>& styles,
                              const SvgOptions& opts = {}) {
  const detail::SvgCanvas canvas(scene.bounds, opts);
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         detail::svg_num(canvas.px_width()) + "\" height=\"" +
         detail::svg_num(canvas.px_height()) + "\" viewBox=\"0 0 " +
         detail::svg_num(canvas.px_width()) + " " +
         detail::svg_num(canvas.px_height()) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  // Bounds frame.
  {
    const Point a = canvas.map({scene.bounds.xmin, scene.bounds.ymax});
    const Point b = canvas.map({scene.bounds.xmax, scene.bounds.ymin});
    out += "<rect x=\"" + detail::svg_num(a.x) + "\" y=\"" +
           detail::svg_num(a.y) + "\" width=\"" + detail::svg_num(b.x - a.x) +
           "\" height=\"" + detail::svg_num(b.y - a.y) +
           "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"2\"/>\n";
  }

  // Obstacles, filled, in scene order.
  for (const Polygon& poly : scene.obstacles) {
    out += "<polygon points=\"";
    bool first = true;
    for (const Point& v : poly.vertices()) {
      const Point p = canvas.map(v);
      if (!first) out += " ";
      out += detail::svg_num(p.x) + "," + detail::svg_num(p.y);
      first = false;
    }
    out += "\" fill=\"#9e9e9e\" stroke=\"#616161\" stroke-width=\"1\"/>\n";
  }

  // Paths: one <path> element per run of same-direction primitives, so
  // reverse runs carry their own dash pattern.
  for (std::size_t pi = 0; pi < paths.size(); ++pi) {
    const CarPath& path = paths[pi];
    const SvgPathStyle style =
        pi < styles.size() ? styles[pi] : SvgPathStyle{};
    std::size_t i = 0;
    while (i < path.primitives.size()) {
      const Direction dir = path.primitives[i].direction();
      std::string d;
      bool first = true;
      while (i < path.primitives.size() &&
             path.primitives[i].direction() == dir) {
        d += detail::primitive_path_data(canvas, path.primitives[i], first);
        first = false;
        ++i;
      }
      out += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + style.stroke +
             "\" stroke-width=\"" + detail::svg_num(canvas.len(style.stroke_width)) +
             "\" stroke-linecap=\"round\"";
      if (dir == Direction::reverse) {
        out += " stroke-dasharray=\"" + detail::svg_num(canvas.len(0.15)) +
               " " + detail::svg_num(canvas.len(0.1)) + "\"";
      }
      out += "/>\n";
    }

    if (opts.draw_glyphs) {
      // Start: filled disc plus heading tick. Goal: open ring.
      const Pose start = path.start;
      const auto end = path_end_pose(path);
      const Point s = canvas.map(start.position);
      const Point tick =
          canvas.map(start.position + 0.45 * start.direction());
      out += "<circle cx=\"" + detail::svg_num(s.x) + "\" cy=\"" +
             detail::svg_num(s.y) + "\" r=\"" + detail::svg_num(canvas.len(0.18)) +
             "\" fill=\"" + style.stroke + "\"/>\n";
      out += "<line x1=\"" + detail::svg_num(s.x) + "\" y1=\"" +
             detail::svg_num(s.y) + "\" x2=\"" + detail::svg_num(tick.x) +
             "\" y2=\"" + detail::svg_num(tick.y) + "\" stroke=\"" +
             style.stroke + "\" stroke-width=\"" +
             detail::svg_num(canvas.len(0.06)) + "\"/>\n";
      if (end.ok()) {
        const Point g = canvas.map(end.value().position);
        out += "<circle cx=\"" + detail::svg_num(g.x) + "\" cy=\"" +
               detail::svg_num(g.y) + "\" r=\"" +
               detail::svg_num(canvas.len(0.18)) + "\" fill=\"none\" stroke=\"" +
               style.stroke + "\" stroke-width=\"" +
               detail::svg_num(canvas.len(0.06)) + "\"/>\n";
      }
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace carplan
