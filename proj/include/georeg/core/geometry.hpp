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

#pragma once

#include <array>
#include <span>
#include <vector>

#include "georeg/core/types.hpp"

namespace georeg {

// Rectangle of any orientation; corners are in boundary order.
struct OrientedRect {
  std::array<Vec2, 4> corners;
  double angle = 0.0;   // direction of the long side, [0, pi)
  double length = 0.0;  // long side
  double width = 0.0;   // short side
  double area = 0.0;
};

// Andrew's monotone chain. Counter-clockwise (positive cross product) with
// collinear points removed.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

// Minimal-area enclosing rectangle of a convex polygon by rotating calipers.
// One side of the result is collinear with a hull edge.
OrientedRect min_area_rect(std::span<const Vec2> hull);

// Outer corners of the unit squares of a pixel set, in (col, row) units.
// Only the extreme pixels of each row contribute; the convex hull of the
// result equals the hull of every pixel square.
std::vector<Vec2> pixel_square_corners(std::span<const PixelIndex> pixels);

// Shoelace area, positive for counter-clockwise (math orientation) polygons.
double signed_area(std::span<const Vec2> polygon);

bool point_in_polygon(const Vec2& p, std::span<const Vec2> polygon);

}  // namespace georeg
