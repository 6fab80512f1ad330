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
#include <unordered_map>
#include <vector>

#include "georeg/core/types.hpp"
#include "georeg/image/color.hpp"
#include "georeg/simd/kernels.hpp"

namespace georeg::image {

struct MeanShiftConfig {
  double bandwidth = 8.0;       // range radius, L*a*b* units
  double spatial_radius = 0.0;  // pixels; 0 clusters colours only
  bool use_L = true;
  int max_iterations = 50;
  double convergence_tol = 1e-3;    // shift below tol * bandwidth stops a path
  double min_merge_distance = 0.0;  // <= 0 means bandwidth / 2

  double merge_distance() const { return min_merge_distance > 0.0 ? min_merge_distance : 0.5 * bandwidth; }
  void validate() const;
};

// Flat-kernel mode seeking over weighted samples. Samples are bucketed on a
// uniform grid over `grid_dims` with cell size equal to the radius, so a
// window only visits the 3^k neighbouring cells.
class ModeSeeker {
 public:
  ModeSeeker(std::vector<std::vector<double>> coords, std::vector<double> weights, double radius,
             std::vector<int> grid_dims);

  int dims() const noexcept { return static_cast<int>(coords_.size()); }
  std::size_t size() const noexcept { return weights_.size(); }
  double radius() const noexcept { return radius_; }

  simd::WindowSums window(std::span<const double> center) const;

  // Iterates y <- window mean until the shift drops below `tol` or
  // `max_iterations` is reached. `path`, when given, receives every visited
  // position including the start.
  std::vector<double> seek(std::span<const double> start, int max_iterations, double tol,
                           std::vector<std::vector<double>>* path = nullptr,
                           int* iterations = nullptr) const;

  // Original (unsorted) coordinates of sample i.
  std::vector<double> sample(std::size_t i) const;

 private:
  std::uint64_t cell_key(std::span<const double> p, const int* offset) const;

  std::vector<std::vector<double>> coords_;  // sorted by cell
  std::vector<double> weights_;
  std::vector<std::size_t> order_;  // sorted position -> original index
  std::vector<std::size_t> where_;  // original index -> sorted position
  double radius_;
  std::vector<int> grid_dims_;
  std::unordered_map<std::uint64_t, std::pair<std::size_t, std::size_t>> cells_;
};

struct ModeSeekResult {
  int dims = 0;
  std::vector<std::vector<double>> modes;  // merged mode per cluster
  std::vector<std::uint32_t> pixel_cluster;
  int longest_path = 0;  // iterations of the slowest trajectory
};

// Pixel feature vectors: (L*, a*, b*) or (a*, b*); with a spatial radius
// the pixel column and row are appended and every coordinate is scaled to a
// unit window.
std::vector<std::vector<double>> pixel_features(const LabImage& img, const MeanShiftConfig& cfg);

ModeSeekResult mean_shift_modes(const LabImage& img, const MeanShiftConfig& cfg);

// Modes, then an 8-connected split so each segment is spatially contiguous.
LabeledMask mean_shift_segment(const LabImage& img, const MeanShiftConfig& cfg);

}  // namespace georeg::image
