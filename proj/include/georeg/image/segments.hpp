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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "georeg/core/geometry.hpp"
#include "georeg/core/types.hpp"
#include "georeg/image/mean_shift.hpp"

namespace georeg::image {

inline constexpr std::size_t kDefaultMinPixels = 200;
inline constexpr std::size_t kDefaultMaxPixels = 20000;
inline constexpr double kDefaultFillingThreshold = 50.0;  // percent

struct Segment2D {
  std::uint32_t label = 0;
  std::size_t pixel_count = 0;
  Vec2 centroid_px = Vec2::Zero();  // (col, row)
  Vec2 center = Vec2::Zero();       // world
  double area = 0.0;                // m^2
  double filling = 0.0;             // percent of the MBR covered
  OrientedRect mbr_px;              // pixel units, y pointing down
  OrientedRect mbr;                 // world
};

// Keeps labels with min_px <= pixel count <= max_px.
LabeledMask size_filter(const LabeledMask& mask, std::size_t min_px = kDefaultMinPixels,
                        std::size_t max_px = kDefaultMaxPixels);

// Minimal-area rectangle around the union of the pixel squares, in pixel
// units. A single pixel gives a 1 x 1 square.
OrientedRect minimal_bounding_rectangle(std::span<const PixelIndex> pixels);

// 100 * pixel count / MBR area.
double filling_percentage(std::span<const PixelIndex> pixels);
double filling_percentage(std::size_t pixel_count, double mbr_area);

// Strict: a segment at exactly the threshold is rejected.
inline bool passes_filling(double percent, double threshold = kDefaultFillingThreshold) {
  return percent > threshold;
}

// Keeps labels whose filling percentage is strictly above `threshold`.
LabeledMask filling_filter(const LabeledMask& mask, double threshold = kDefaultFillingThreshold);

std::vector<Segment2D> describe_segments(const LabeledMask& mask);

struct SegmentationOptions {
  MeanShiftConfig mean_shift;
  std::size_t min_px = kDefaultMinPixels;
  std::size_t max_px = kDefaultMaxPixels;
  double filling_threshold = kDefaultFillingThreshold;
};

struct SegmentationResult {
  std::uint32_t raw_count = 0;
  std::uint32_t sized_count = 0;
  LabeledMask mask;  // after both filters
  std::vector<Segment2D> segments;
};

SegmentationResult segment_image(const ImageU8& image, const SegmentationOptions& options = {});

}  // namespace georeg::image
