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

// Synthetic urban scenes with known geometry: flat-roofed buildings and
// ring-shaped tree crowns on flat ground, a LiDAR sampling of the surface
// and a nadir pinhole image of it.

#include <cstdint>
#include <vector>

#include "georeg/core/camera.hpp"
#include "georeg/core/types.hpp"
#include "georeg/eval/metrics.hpp"

namespace georeg::synth {

struct SceneSpec {
  double extent = 400.0;  // square side, meters
  double origin_x = 320000.0;  // south-west corner
  double origin_y = 5180000.0;
  int n_buildings = 20;
  double min_height = 6.0;
  double max_height = 25.0;
  double min_size = 12.0;  // footprint side, meters
  double max_size = 40.0;
  double l_shape_fraction = 0.4;
  double margin = 10.0;  // clearance between objects and to the scene border
  int n_trees = 8;
  double min_tree_radius = 4.0;
  double max_tree_radius = 7.0;
  double min_tree_height = 5.0;
  double max_tree_height = 12.0;
  double density = 2.0;       // LiDAR points per m^2
  double resolution = 0.5;    // ground sampling distance at z = 0, m/px
  double altitude = 2000.0;   // camera height above ground
  double point_jitter = 0.05; // meters, vertical
  double color_noise = 2.0;   // 8-bit units
  std::uint64_t seed = 1;

  // Throws kConfig for out-of-range values.
  void validate() const;
};

enum class BuildingShape { kRectangle, kLShape };

struct Building {
  std::uint32_t id = 0;
  BuildingShape shape = BuildingShape::kRectangle;
  std::vector<Vec2> footprint;  // counter-clockwise, world
  double height = 0.0;
  Vec2 center = Vec2::Zero();   // area centroid
  double area = 0.0;
  std::array<std::uint8_t, 3> color{};
};

struct Tree {
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
  double inner_radius = 0.0;
  double gap_direction = 0.0;  // radians; the ring omits a quarter around it
  double height = 0.0;

  bool contains(const Vec2& p) const;
};

struct Scene {
  SceneSpec spec;
  std::vector<Building> buildings;
  std::vector<Tree> trees;
  CameraPose true_pose;
  int width = 0;
  int height = 0;
  PointCloud cloud;
  ImageU8 image;  // georeference left at the true nadir mapping of z = 0
};

// Throws kSpecInfeasible when the objects do not fit.
Scene generate_scene(const SceneSpec& spec);

// Horizontal translation of exactly `translation` meters in a random
// direction and a rotation of `rotation` radians about a random axis.
CameraPose perturb_pose(const CameraPose& pose, double translation, double rotation, std::uint64_t seed);

// North-up georeference of an image seen from `pose`, fitted to the
// footprint of its corners on z = 0.
GeoTransform georef_from_pose(const CameraPose& pose, int width, int height);

// Footprint corners on the ground with their true image positions; only
// corners inside the image.
std::vector<eval::ControlPoint> control_points(const Scene& scene);

// Building whose footprint contains `p`, or 0.
std::uint32_t building_at(const Scene& scene, const Vec2& p);
// Building whose roof is visible at image position `pixel` under the true
// pose, or 0.
std::uint32_t building_seen_at(const Scene& scene, const Vec2& pixel);

double polygon_area(const std::vector<Vec2>& polygon);
Vec2 polygon_centroid(const std::vector<Vec2>& polygon);

}  // namespace georeg::synth
