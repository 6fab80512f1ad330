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

#include "georeg/image/segments.hpp"

#include <spdlog/spdlog.h>

#include "georeg/core/regions.hpp"
#include "georeg/image/color.hpp"

namespace georeg::image {

LabeledMask size_filter(const LabeledMask& mask, std::size_t min_px, std::size_t max_px) {
  const auto areas = label_areas(mask);
  return filter_labels(mask, [&](std::uint32_t l) { return areas[l] >= min_px && areas[l] <= max_px; });
}

OrientedRect minimal_bounding_rectangle(std::span<const PixelIndex> pixels) {
  if (pixels.empty()) throw Error(ErrorCode::kInvalidArgument, "empty pixel set");
  return min_area_rect(convex_hull(pixel_square_corners(pixels)));
}

double filling_percentage(std::size_t pixel_count, double mbr_area) {
  if (!(mbr_area > 0.0)) throw Error(ErrorCode::kInvalidArgument, "MBR area must be positive");
  return 100.0 * static_cast<double>(pixel_count) / mbr_area;
}

double filling_percentage(std::span<const PixelIndex> pixels) {
  return filling_percentage(pixels.size(), minimal_bounding_rectangle(pixels).area);
}

LabeledMask filling_filter(const LabeledMask& mask, double threshold) {
  const auto pixels = label_pixels(mask);
  return filter_labels(mask, [&](std::uint32_t l) {
    return passes_filling(filling_percentage(pixels[l - 1]), threshold);
  });
}

std::vector<Segment2D> describe_segments(const LabeledMask& mask) {
  const GeoTransform& geo = mask.raster.geo();
  const auto pixels = label_pixels(mask);
  std::vector<Segment2D> out;
  out.reserve(pixels.size());
  for (std::uint32_t l = 1; l <= mask.count; ++l) {
    const auto& px = pixels[l - 1];
    if (px.empty()) continue;
    Segment2D s;
    s.label = l;
    s.pixel_count = px.size();
    double sc = 0.0, sr = 0.0;
    for (const PixelIndex& p : px) {
      sc += p.col;
      sr += p.row;
    }
    s.centroid_px = Vec2(sc, sr) / static_cast<double>(px.size());
    s.center = geo.world(s.centroid_px.x(), s.centroid_px.y());
    s.area = static_cast<double>(px.size()) * geo.resolution * geo.resolution;
    auto corners = pixel_square_corners(px);
    s.mbr_px = min_area_rect(convex_hull(corners));
    s.filling = filling_percentage(px.size(), s.mbr_px.area);
    for (Vec2& c : corners) c = geo.world(c.x(), c.y());
    s.mbr = min_area_rect(convex_hull(std::move(corners)));
    out.push_back(s);
  }
  return out;
}

SegmentationResult segment_image(const ImageU8& image, const SegmentationOptions& options) {
  const LabImage lab = rgb_to_lab(image, options.mean_shift.use_L);
  const LabeledMask raw = mean_shift_segment(lab, options.mean_shift);
  const LabeledMask sized = size_filter(raw, options.min_px, options.max_px);
  SegmentationResult res;
  res.raw_count = raw.count;
  res.sized_count = sized.count;
  res.mask = filling_filter(sized, options.filling_threshold);
  res.segments = describe_segments(res.mask);
  spdlog::info("segmentation: {} segments, {} after size filter, {} after filling filter",
               res.raw_count, res.sized_count, res.mask.count);
  return res;
}

}  // namespace georeg::image
