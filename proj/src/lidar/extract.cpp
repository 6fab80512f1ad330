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

#include "georeg/lidar/extract.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include <spdlog/spdlog.h>

#include "georeg/core/regions.hpp"
#include "georeg/simd/kernels.hpp"

namespace georeg::lidar {
namespace {

constexpr std::array<PixelIndex, 8> kMoore = {{
    {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

int moore_direction(PixelIndex from, PixelIndex to) {
  for (int d = 0; d < 8; ++d) {
    if (from.col + kMoore[d].col == to.col && from.row + kMoore[d].row == to.row) return d;
  }
  return -1;
}

enum class MorphOp { kErode, kDilate };

// Separable-by-rows diamond filter. Row r of the output combines, for each
// dy in [-radius, radius], row r + dy filtered horizontally with half-width
// radius - |dy|.
BinaryMask diamond_filter(const BinaryMask& mask, int radius, MorphOp op) {
  if (radius < 0) throw Error(ErrorCode::kInvalidArgument, "negative structuring element radius");
  if (radius == 0) return mask;
  const auto& k = simd::kernels();
  const auto combine = op == MorphOp::kErode ? k.min_u8 : k.max_u8;
  const int w = mask.width();
  const int h = mask.height();
  const std::size_t padded = static_cast<std::size_t>(w) + 2 * radius;

  // levels[q][row] = horizontal filter of half-width q, zero padded.
  std::vector<std::vector<std::uint8_t>> levels(radius + 1,
                                                std::vector<std::uint8_t>(padded * h, 0));
  for (int row = 0; row < h; ++row) {
    std::copy_n(&mask.at(0, row), w, levels[0].data() + row * padded + radius);
  }
  std::vector<std::uint8_t> tmp(padded);
  for (int q = 1; q <= radius; ++q) {
    for (int row = 0; row < h; ++row) {
      const std::uint8_t* src = levels[q - 1].data() + row * padded;
      std::uint8_t* dst = levels[q].data() + row * padded;
      std::copy_n(src, padded, dst);
      combine(tmp.data() + 1, src, src + 2, padded - 2);
      combine(dst + 1, dst + 1, tmp.data() + 1, padded - 2);
    }
  }

  BinaryMask out(w, h, 1, mask.geo(), 0);
  std::vector<std::uint8_t> acc(w);
  for (int row = 0; row < h; ++row) {
    bool clipped = false;
    bool first = true;
    for (int dy = -radius; dy <= radius; ++dy) {
      const int r = row + dy;
      if (r < 0 || r >= h) {
        clipped = true;
        continue;
      }
      const std::uint8_t* src = levels[radius - std::abs(dy)].data() + r * padded + radius;
      if (first) {
        std::copy_n(src, w, acc.data());
        first = false;
      } else {
        combine(acc.data(), acc.data(), src, w);
      }
    }
    if (op == MorphOp::kErode && clipped) continue;  // a diamond row falls outside
    std::copy_n(acc.data(), w, &out.at(0, row));
  }
  return out;
}

}  // namespace

double threshold_from_ground(std::span<const double> ground_z) {
  if (ground_z.empty()) throw Error(ErrorCode::kNoGroundPoints, "no ground elevations");
  const double n = static_cast<double>(ground_z.size());
  double sum = 0.0;
  for (double z : ground_z) sum += z;
  const double mean = sum / n;
  double ss = 0.0;
  for (double z : ground_z) ss += (z - mean) * (z - mean);
  const double stddev = std::sqrt(ss / n);
  return mean + std::max(kMinElevationMargin, stddev);
}

ElevationSplit elevation_threshold(const PointCloud& cloud, const ElevationOptions& options) {
  if (cloud.empty()) throw Error(ErrorCode::kEmptyCloud, "point cloud has no points");
  std::vector<double> zg;
  if (cloud.has_classes()) {
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      if (cloud.classes[i] == PointClass::kGround) zg.push_back(cloud.points[i].z());
    }
  }
  if (zg.empty()) {
    if (!options.lowest_decile_fallback) {
      throw Error(ErrorCode::kNoGroundPoints, "cloud has no ground-classified points");
    }
    std::vector<double> z(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) z[i] = cloud.points[i].z();
    std::sort(z.begin(), z.end());
    const std::size_t n = std::max<std::size_t>(1, (z.size() + 9) / 10);
    zg.assign(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(n));
  }

  ElevationSplit split;
  split.threshold = threshold_from_ground(zg);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    PointCloud& dst = cloud.points[i].z() > split.threshold ? split.non_ground : split.ground;
    dst.points.push_back(cloud.points[i]);
    if (cloud.has_classes()) dst.classes.push_back(cloud.classes[i]);
    if (cloud.has_intensity()) dst.intensity.push_back(cloud.intensity[i]);
  }
  return split;
}

double estimate_density(const PointCloud& cloud) {
  if (cloud.empty()) throw Error(ErrorCode::kEmptyCloud, "point cloud has no points");
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const Point3& p : cloud.points) {
    x0 = std::min(x0, p.x());
    x1 = std::max(x1, p.x());
    y0 = std::min(y0, p.y());
    y1 = std::max(y1, p.y());
  }
  const double area = (x1 - x0) * (y1 - y0);
  return area > 0.0 ? static_cast<double>(cloud.size()) / area : 0.0;
}

double default_resolution(double density) {
  if (!(density > 0.0)) return 1.0;
  return std::ceil(std::sqrt(2.0 / density) * 4.0 - 1e-9) / 4.0;
}

BinaryMask vertical_project(const PointCloud& cloud, double resolution) {
  if (cloud.empty()) throw Error(ErrorCode::kEmptyCloud, "nothing to project");
  if (!(resolution > 0.0)) throw Error(ErrorCode::kInvalidArgument, "resolution must be positive");
  double min_x = std::numeric_limits<double>::infinity(), max_y = -min_x;
  for (const Point3& p : cloud.points) {
    min_x = std::min(min_x, p.x());
    max_y = std::max(max_y, p.y());
  }
  // One empty cell of margin on the west and north sides keeps indices
  // non-negative under rounding.
  const double x0 = (std::floor(min_x / resolution) - 1.0) * resolution;
  const double top = (std::floor(max_y / resolution) + 2.0) * resolution;
  const GeoTransform geo{x0 + 0.5 * resolution, top - 0.5 * resolution, resolution};

  std::vector<PixelIndex> cells(cloud.size());
  int max_col = 0, max_row = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    cells[i] = geo.cell(cloud.points[i].x(), cloud.points[i].y());
    max_col = std::max(max_col, cells[i].col);
    max_row = std::max(max_row, cells[i].row);
  }
  BinaryMask mask(max_col + 2, max_row + 2, 1, geo, 0);
  for (const PixelIndex& c : cells) mask.at(c.col, c.row) = 1;
  return mask;
}

BinaryMask erode(const BinaryMask& mask, int radius) {
  return diamond_filter(mask, radius, MorphOp::kErode);
}

BinaryMask dilate(const BinaryMask& mask, int radius) {
  return diamond_filter(mask, radius, MorphOp::kDilate);
}

BinaryMask morphological_open(const BinaryMask& mask, int se_size) {
  if (se_size < 3 || se_size % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument, "structuring element size must be odd and >= 3");
  }
  const int radius = (se_size - 1) / 2;
  return dilate(erode(mask, radius), radius);
}

LabeledMask label_connected(const BinaryMask& mask) {
  Raster<std::uint32_t> values(mask.width(), mask.height(), 1, mask.geo(), 0u);
  auto src = mask.data();
  auto dst = values.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] != 0 ? 1u : 0u;
  return label_components(values);
}

LabeledMask remove_small_regions(const LabeledMask& mask, double min_area) {
  const double cell_area = mask.raster.geo().resolution * mask.raster.geo().resolution;
  const auto areas = label_areas(mask);
  return filter_labels(mask, [&](std::uint32_t l) {
    return static_cast<double>(areas[l]) * cell_area >= min_area;
  });
}

std::vector<PixelIndex> trace_boundary(const LabeledMask& mask, std::uint32_t label) {
  const auto& r = mask.raster;
  auto inside = [&](PixelIndex p) {
    return r.contains(p.col, p.row) && r.at(p.col, p.row) == label;
  };
  PixelIndex start{-1, -1};
  for (int row = 0; row < r.height() && start.col < 0; ++row) {
    for (int col = 0; col < r.width(); ++col) {
      if (r.at(col, row) == label) {
        start = {col, row};
        break;
      }
    }
  }
  if (start.col < 0) return {};

  std::vector<PixelIndex> ring{start};
  PixelIndex current = start;
  int back = 4;  // the west neighbour of the first raster-order pixel is outside
  PixelIndex first_move{-1, -1};
  const std::size_t limit = 4 * r.pixel_count() + 8;
  for (std::size_t step = 0; step < limit; ++step) {
    PixelIndex next{-1, -1};
    int next_back = -1;
    for (int k = 1; k <= 8; ++k) {
      const int d = (back + k) % 8;
      const PixelIndex cand{current.col + kMoore[d].col, current.row + kMoore[d].row};
      if (inside(cand)) {
        const int pd = (back + k - 1) % 8;
        const PixelIndex prev{current.col + kMoore[pd].col, current.row + kMoore[pd].row};
        next = cand;
        next_back = moore_direction(next, prev);
        break;
      }
    }
    if (next_back < 0) break;  // isolated pixel
    if (current == start && first_move.col >= 0 && next == first_move) break;
    if (current == start && first_move.col < 0) first_move = next;
    ring.push_back(next);
    current = next;
    back = next_back;
  }
  if (ring.size() > 1 && ring.back() == start) return ring;
  ring.push_back(start);
  return ring;
}

OrientedRect footprint_rectangle(std::span<const PixelIndex> pixels, const GeoTransform& geo) {
  std::vector<Vec2> corners = pixel_square_corners(pixels);
  for (Vec2& c : corners) c = geo.world(c.x(), c.y());
  const auto hull = convex_hull(std::move(corners));
  return min_area_rect(hull);
}

std::vector<Region3D> extract_building_points(const PointCloud& non_ground, const LabeledMask& mask) {
  const auto& r = mask.raster;
  std::vector<Region3D> regions(mask.count);
  for (std::uint32_t l = 1; l <= mask.count; ++l) regions[l - 1].label = l;
  for (const Point3& p : non_ground.points) {
    const PixelIndex c = r.geo().cell(p.x(), p.y());
    if (!r.contains(c.col, c.row)) continue;
    const std::uint32_t l = r.at(c.col, c.row);
    if (l != 0) regions[l - 1].points.push_back(p);
  }
  auto pixels = label_pixels(mask);
  const double cell_area = r.geo().resolution * r.geo().resolution;
  std::vector<Region3D> out;
  for (std::uint32_t l = 1; l <= mask.count; ++l) {
    Region3D& reg = regions[l - 1];
    if (reg.points.empty()) continue;
    reg.footprint = std::move(pixels[l - 1]);
    for (const PixelIndex& b : trace_boundary(mask, l)) {
      reg.boundary.push_back(r.geo().world(b.col, b.row));
    }
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    for (const Point3& p : reg.points) sum += p;
    sum /= static_cast<double>(reg.points.size());
    reg.center = sum.head<2>();
    reg.mean_z = sum.z();
    reg.area = static_cast<double>(reg.footprint.size()) * cell_area;
    reg.mbr = footprint_rectangle(reg.footprint, r.geo());
    out.push_back(std::move(reg));
  }
  return out;
}

ExtractionResult extract_buildings(const PointCloud& cloud, const ExtractionOptions& options) {
  ExtractionResult res;
  ElevationSplit split = elevation_threshold(cloud, options.elevation);
  res.threshold = split.threshold;
  res.ground_count = split.ground.size();
  res.non_ground_count = split.non_ground.size();
  res.resolution = options.resolution > 0.0 ? options.resolution
                                            : default_resolution(estimate_density(cloud));
  spdlog::info("elevation threshold {:.3f} m, {} non-ground of {} points, cell {:.2f} m",
               res.threshold, res.non_ground_count, cloud.size(), res.resolution);
  if (split.non_ground.empty()) {
    // Nothing stands above the threshold: an empty 1x1 mask, no regions.
    const Point3& p = cloud.points.front();
    res.mask = LabeledMask{Raster<std::uint32_t>(1, 1, 1, GeoTransform{p.x(), p.y(), res.resolution}, 0u), 0};
    return res;
  }
  const BinaryMask projected = vertical_project(split.non_ground, res.resolution);
  const BinaryMask opened = morphological_open(projected, options.se_size);
  res.mask = remove_small_regions(label_connected(opened), options.min_area);
  res.regions = extract_building_points(split.non_ground, res.mask);
  spdlog::info("{} building regions", res.regions.size());
  return res;
}

}  // namespace georeg::lidar
