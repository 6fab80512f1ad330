// Copyright 2026 The georeg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "georeg/core/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace georeg {
namespace {

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

double axis_angle(const Vec2& d) {
  double a = std::atan2(d.y(), d.x());
  if (a < 0.0) a += std::numbers::pi;
  if (a >= std::numbers::pi - 1e-12) a = 0.0;
  return a;
}

}  // namespace

std::vector<Vec2> convex_hull(std::vector<Vec2> points) {
  std::sort(points.begin(), points.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return points;

  std::vector<Vec2> hull(2 * points.size());
  std::size_t k = 0;
  for (const Vec2& p : points) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    const Vec2& p = points[i];
    while (k >= lower && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

OrientedRect min_area_rect(std::span<const Vec2> hull) {
  OrientedRect best;
  const std::size_t n = hull.size();
  if (n == 0) return best;
  if (n == 1) {
    best.corners.fill(hull[0]);
    return best;
  }
  if (n == 2) {
    const Vec2 d = hull[1] - hull[0];
    best.corners = {hull[0], hull[1], hull[1], hull[0]};
    best.length = d.norm();
    best.angle = axis_angle(d);
    return best;
  }

  auto next = [n](std::size_t i) { return (i + 1) % n; };
  double scale = 0.0;
  for (const Vec2& p : hull) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  const double eps = 1e-12 * std::max(1.0, scale);

  std::size_t j = 0, k = 0, l = 0;  // max along edge, max along normal, min along edge
  bool first = true;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e = (hull[next(i)] - hull[i]).normalized();
    const Vec2 nrm(-e.y(), e.x());
    if (first) {
      for (std::size_t q = 0; q < n; ++q) {
        if (hull[q].dot(e) > hull[j].dot(e)) j = q;
        if (hull[q].dot(nrm) > hull[k].dot(nrm)) k = q;
        if (hull[q].dot(e) < hull[l].dot(e)) l = q;
      }
      first = false;
    } else {
      for (std::size_t s = 0; s < n && hull[next(j)].dot(e) > hull[j].dot(e) + eps; ++s) j = next(j);
      for (std::size_t s = 0; s < n && hull[next(k)].dot(nrm) > hull[k].dot(nrm) + eps; ++s) k = next(k);
      for (std::size_t s = 0; s < n && hull[next(l)].dot(e) < hull[l].dot(e) - eps; ++s) l = next(l);
    }
    const double lo = (hull[l] - hull[i]).dot(e);
    const double hi = (hull[j] - hull[i]).dot(e);
    const double height = (hull[k] - hull[i]).dot(nrm);
    const double area = (hi - lo) * height;
    if (i == 0 || area < best.area) {
      const Vec2 c0 = hull[i] + lo * e;
      const Vec2 c1 = hull[i] + hi * e;
      best.corners = {c0, c1, c1 + height * nrm, c0 + height * nrm};
      best.area = area;
      if (hi - lo >= height) {
        best.length = hi - lo;
        best.width = height;
        best.angle = axis_angle(e);
      } else {
        best.length = height;
        best.width = hi - lo;
        best.angle = axis_angle(nrm);
      }
    }
  }
  return best;
}

std::vector<Vec2> pixel_square_corners(std::span<const PixelIndex> pixels) {
  std::map<int, std::pair<int, int>> rows;
  for (const PixelIndex& p : pixels) {
    auto [it, inserted] = rows.try_emplace(p.row, p.col, p.col);
    if (!inserted) {
      it->second.first = std::min(it->second.first, p.col);
      it->second.second = std::max(it->second.second, p.col);
    }
  }
  std::vector<Vec2> out;
  out.reserve(rows.size() * 4);
  for (const auto& [row, span] : rows) {
    const double top = row - 0.5, bottom = row + 0.5;
    const double left = span.first - 0.5, right = span.second + 0.5;
    out.emplace_back(left, top);
    out.emplace_back(left, bottom);
    out.emplace_back(right, top);
    out.emplace_back(right, bottom);
  }
  return out;
}

double signed_area(std::span<const Vec2> polygon) {
  double s = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = polygon[i];
    const Vec2& b = polygon[(i + 1) % n];
    s += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * s;
}

bool point_in_polygon(const Vec2& p, std::span<const Vec2> polygon) {
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = polygon[i];
    const Vec2& b = polygon[j];
    if ((a.y() > p.y()) != (b.y() > p.y()) &&
        p.x() < (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x()) {
      inside = !inside;
    }
  }
  return inside;
}

}  // namespace georeg
