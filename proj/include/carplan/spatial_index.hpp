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
#include <cstddef>
#include <vector>

#include "carplan/geometry.hpp"

namespace carplan {

/// Uniform-grid k-nearest-neighbor index over a fixed point set.
///
/// Queries are exact: results match a brute-force sort by (squared
/// distance, index), ties broken by the lower index. The grid only prunes
/// cells that provably cannot improve the current k-th best candidate.
class PointGridIndex {
 public:
  PointGridIndex() = default;

  explicit PointGridIndex(std::vector<Point> points) : points_(std::move(points)) {
    if (points_.empty()) return;
    xmin_ = xmax_ = points_[0].x;
    ymin_ = ymax_ = points_[0].y;
    for (const Point& p : points_) {
      xmin_ = std::min(xmin_, p.x);
      xmax_ = std::max(xmax_, p.x);
      ymin_ = std::min(ymin_, p.y);
      ymax_ = std::max(ymax_, p.y);
    }
    const double w = std::max(xmax_ - xmin_, 1e-12);
    const double h = std::max(ymax_ - ymin_, 1e-12);
    const double target_cells = static_cast<double>(points_.size());
    // Roughly one point per cell.
    cols_ = std::max<std::size_t>(1, static_cast<std::size_t>(
                                         std::sqrt(target_cells * w / h)));
    rows_ = std::max<std::size_t>(1, static_cast<std::size_t>(
                                         std::sqrt(target_cells * h / w)));
    cell_w_ = w / static_cast<double>(cols_);
    cell_h_ = h / static_cast<double>(rows_);
    cells_.assign(cols_ * rows_, {});
    for (std::size_t i = 0; i < points_.size(); ++i) {
      cells_[cell_of(points_[i])].push_back(static_cast<int>(i));
    }
  }

  std::size_t size() const { return points_.size(); }
  const std::vector<Point>& points() const { return points_; }

  /// Indices of the min(k, size) nearest points to q, ascending by
  /// (distance, index).
  std::vector<int> k_nearest(Point q, std::size_t k) const {
    std::vector<int> out;
    if (points_.empty() || k == 0) return out;
    k = std::min(k, points_.size());

    // Small sets: brute force is both faster and trivially correct.
    if (points_.size() <= 64 || cells_.empty()) return brute_force(q, k);

    using Cand = std::pair<double, int>;  // (squared distance, index)
    std::vector<Cand> best;               // max-heap on (d2, index)
    best.reserve(k + 1);
    const auto push = [&](int idx) {
      const Cand c{distance_sq(q, points_[idx]), idx};
      if (best.size() < k) {
        best.push_back(c);
        std::push_heap(best.begin(), best.end());
      } else if (c < best.front()) {
        std::pop_heap(best.begin(), best.end());
        best.back() = c;
        std::push_heap(best.begin(), best.end());
      }
    };

    const long qc = col_of(q.x);
    const long qr = row_of(q.y);
    const long max_ring = static_cast<long>(std::max(cols_, rows_));
    for (long ring = 0; ring <= max_ring; ++ring) {
      if (best.size() == k) {
        // Cells in this ring are at least (ring-1) cell widths away.
        const double gap = static_cast<double>(ring - 1) *
                           std::min(cell_w_, cell_h_);
        if (ring > 0 && gap > 0.0 && gap * gap > best.front().first) break;
      }
      for_ring(qc, qr, ring, [&](std::size_t cell) {
        for (int idx : cells_[cell]) push(idx);
      });
    }

    std::sort_heap(best.begin(), best.end());
    out.reserve(best.size());
    for (const Cand& c : best) out.push_back(c.second);
    return out;
  }

 private:
  std::vector<int> brute_force(Point q, std::size_t k) const {
    std::vector<std::pair<double, int>> all;
    all.reserve(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
      all.emplace_back(distance_sq(q, points_[i]), static_cast<int>(i));
    }
    std::partial_sort(all.begin(), all.begin() + static_cast<long>(k),
                      all.end());
    std::vector<int> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.push_back(all[i].second);
    return out;
  }

  long col_of(double x) const {
    const long c = static_cast<long>(std::floor((x - xmin_) / cell_w_));
    return std::clamp<long>(c, 0, static_cast<long>(cols_) - 1);
  }
  long row_of(double y) const {
    const long r = static_cast<long>(std::floor((y - ymin_) / cell_h_));
    return std::clamp<long>(r, 0, static_cast<long>(rows_) - 1);
  }
  std::size_t cell_of(Point p) const {
    return static_cast<std::size_t>(row_of(p.y)) * cols_ +
           static_cast<std::size_t>(col_of(p.x));
  }

  template <typename Fn>
  void for_ring(long qc, long qr, long ring, Fn&& fn) const {
    const long c0 = qc - ring, c1 = qc + ring;
    const long r0 = qr - ring, r1 = qr + ring;
    for (long r = r0; r <= r1; ++r) {
      if (r < 0 || r >= static_cast<long>(rows_)) continue;
      for (long c = c0; c <= c1; ++c) {
        if (c < 0 || c >= static_cast<long>(cols_)) continue;
        const bool border = (r == r0 || r == r1 || c == c0 || c == c1);
        if (!border) continue;
        fn(static_cast<std::size_t>(r) * cols_ + static_cast<std::size_t>(c));
      }
    }
  }

  std::vector<Point> points_;
  std::vector<std::vector<int>> cells_;
  std::size_t cols_ = 0, rows_ = 0;
  double cell_w_ = 1.0, cell_h_ = 1.0;
  double xmin_ = 0.0, xmax_ = 0.0, ymin_ = 0.0, ymax_ = 0.0;
};

}  // namespace carplan
