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

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "georeg/core/camera.hpp"
#include "georeg/core/types.hpp"

namespace georeg::eval {

struct Tally {
  long tp = 0;
  long fa = 0;
  long m = 0;
};

struct PrecisionRecall {
  double precision = 0.0;  // percent
  double recall = 0.0;     // percent
};

// Throws kUndefinedMetric when TP + FA or TP + M is zero.
PrecisionRecall precision_recall(const Tally& t);

// TP: found pairs present in the truth; FA: found pairs absent from it;
// M: truth pairs not found.
Tally tally_pairs(std::span<const std::pair<std::uint32_t, std::uint32_t>> found,
                  std::span<const std::pair<std::uint32_t, std::uint32_t>> truth);

struct ControlPointPair {
  Vec2 image;  // world position read from the image georeference
  Vec2 lidar;  // world position of the same feature in the LiDAR frame
};

// Mean planimetric distance. Throws kEmptyList.
double relative_shift(std::span<const ControlPointPair> pairs);

// (before - after) / before * 100. Throws kZeroBefore unless before > 0.
double shift_gain(double before, double after);

// Control point as measured on the image (pixel) and in the LiDAR (world).
struct ControlPoint {
  Vec2 pixel;
  Point3 world;
};

// Intersection of the viewing ray through `pixel` with the plane Z = z.
// Throws kDegenerateConfiguration when the ray is parallel to the plane.
Vec2 back_project_to_plane(const ProjectionMatrix& p, const Vec2& pixel, double z);

// Pairs measured through the image georeference.
std::vector<ControlPointPair> pairs_from_georef(std::span<const ControlPoint> cps, const GeoTransform& geo);
// Pairs measured through an estimated projection matrix.
std::vector<ControlPointPair> pairs_from_projection(std::span<const ControlPoint> cps,
                                                    const ProjectionMatrix& p);

enum class ColorBy { kElevation, kIntensity };

// Linear blue-to-red ramp for t in [0, 1] (clamped).
std::array<std::uint8_t, 3> color_ramp(double t);

// Projects every point with P and paints the nearest pixel; points outside
// the image or behind the camera are skipped. Later points overwrite
// earlier ones. Grayscale inputs are expanded to RGB.
ImageU8 render_overlay(const ImageU8& image, const PointCloud& cloud, const ProjectionMatrix& p,
                       ColorBy color_by = ColorBy::kElevation);

// Affine camera equivalent to a north-up georeference for points on any
// plane: u, v from (x, y) only.
ProjectionMatrix georef_camera(const GeoTransform& geo);

}  // namespace georeg::eval
