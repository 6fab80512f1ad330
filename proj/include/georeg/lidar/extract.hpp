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

// Building extraction from a classified airborne LiDAR cloud: elevation
// thresholding against ground statistics, vertical projection to a binary
// mask, diamond opening, 8-connected labeling, small-region removal and
// point collection per labeled footprint.

#include <cstdint>
#include <span>
#include <vector>

#include "georeg/core/geometry.hpp"
#include "georeg/core/types.hpp"

namespace georeg::lidar {

inline constexpr double kMinElevationMargin = 2.5;  // meters
inline constexpr double kDefaultMinArea = 20.0;     // square meters
inline constexpr int kDefaultStructuringElement = 5;

struct ElevationOptions {
  // Use the lowest 10% of z values as ground samples when the cloud carries
  // no ground-classified points.
  bool lowest_decile_fallback = false;
};

struct ElevationSplit {
  double threshold = 0.0;
  PointCloud ground;
  PointCloud non_ground;
};

// mean(z) + max(2.5, stddev(z)), population standard deviation.
double threshold_from_ground(std::span<const double> ground_z);

// Points with z > T_e are non-ground; every other point is ground.
ElevationSplit elevation_threshold(const PointCloud& cloud, const ElevationOptions& options = {});

// Points per square meter over the planimetric bounding box.
double estimate_density(const PointCloud& cloud);

// Cell size that leaves about two points per cell: sqrt(2 / density),
// rounded up to a quarter meter. 2 pts/m^2 gives 1 m.
double default_resolution(double density);

// 1 where at least one point falls in the cell. The grid is anchored on
// multiples of `resolution` and covers the cloud's bounding box.
BinaryMask vertical_project(const PointCloud& cloud, double resolution);

// Diamond structuring element: offsets with |dx| + |dy| <= radius. Pixels
// outside the raster count as background for both operations.
BinaryMask erode(const BinaryMask& mask, int radius);
BinaryMask dilate(const BinaryMask& mask, int radius);

// Erosion then dilation with a diamond of odd size `se_size` >= 3
// (radius (se_size - 1) / 2).
BinaryMask morphological_open(const BinaryMask& mask, int se_size);

// 8-connected labeling, labels in raster-scan order of first pixel.
LabeledMask label_connected(const BinaryMask& mask);

// Drops regions whose area (pixels * resolution^2) is below `min_area` and
// renumbers the survivors.
LabeledMask remove_small_regions(const LabeledMask& mask, double min_area = kDefaultMinArea);

// Outer boundary of one label by Moore-neighbour tracing, clockwise on a
// north-up display, starting at the label's first pixel in raster order.
// The returned ring repeats its first pixel at the end.
std::vector<PixelIndex> trace_boundary(const LabeledMask& mask, std::uint32_t label);

struct Region3D {
  std::uint32_t label = 0;
  std::vector<Point3> points;
  std::vector<PixelIndex> footprint;
  std::vector<Vec2> boundary;  // world coordinates, closed
  Vec2 center = Vec2::Zero();  // mean planimetric position of the points
  double mean_z = 0.0;
  double area = 0.0;           // footprint area, m^2
  OrientedRect mbr;            // world coordinates
};

// Collects the non-ground points seeded by each labeled footprint. Labels
// that receive no points are dropped.
std::vector<Region3D> extract_building_points(const PointCloud& non_ground, const LabeledMask& mask);

struct ExtractionOptions {
  double resolution = 0.0;  // <= 0 selects default_resolution(density)
  int se_size = kDefaultStructuringElement;
  double min_area = kDefaultMinArea;
  ElevationOptions elevation;
};

struct ExtractionResult {
  double threshold = 0.0;
  std::size_t ground_count = 0;
  std::size_t non_ground_count = 0;
  double resolution = 0.0;
  LabeledMask mask;
  std::vector<Region3D> regions;
};

ExtractionResult extract_buildings(const PointCloud& cloud, const ExtractionOptions& options = {});

// World-frame minimal-area rectangle around a set of raster pixels.
OrientedRect footprint_rectangle(std::span<const PixelIndex> pixels, const GeoTransform& geo);

}  // namespace georeg::lidar
