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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "georeg/core/error.hpp"

namespace georeg {

// Easting, northing, altitude in meters.
using Point3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

enum class PointClass : std::uint8_t { kUnclassified = 0, kGround, kNonGround };

struct PointCloud {
  std::vector<Point3> points;
  // Optional; empty or the same length as `points`.
  std::vector<PointClass> classes;
  // Optional; empty or the same length as `points`.
  std::vector<std::uint8_t> intensity;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
  bool has_classes() const noexcept { return !classes.empty(); }
  bool has_intensity() const noexcept { return !intensity.empty(); }

  void push_back(const Point3& p, PointClass c, std::uint8_t i = 0) {
    points.push_back(p);
    classes.push_back(c);
    intensity.push_back(i);
  }

  // Throws kInvalidArgument when optional attribute lengths disagree or a
  // coordinate is not finite.
  void validate() const;
};

struct PixelIndex {
  int col = 0;
  int row = 0;
  friend bool operator==(const PixelIndex&, const PixelIndex&) = default;
};

// North-up affine georeference. `origin` is the world position of the center
// of pixel (0, 0); rows grow southwards.
struct GeoTransform {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double resolution = 1.0;

  Vec2 world(double col, double row) const noexcept {
    return {origin_x + col * resolution, origin_y - row * resolution};
  }
  Vec2 pixel(double x, double y) const noexcept {
    return {(x - origin_x) / resolution, (origin_y - y) / resolution};
  }
  // Cell whose square footprint contains (x, y).
  PixelIndex cell(double x, double y) const noexcept {
    const Vec2 p = pixel(x, y);
    return {static_cast<int>(std::floor(p.x() + 0.5)),
            static_cast<int>(std::floor(p.y() + 0.5))};
  }

  friend bool operator==(const GeoTransform&, const GeoTransform&) = default;
};

// Row-major, band-interleaved raster.
template <class T>
class Raster {
 public:
  using value_type = T;

  Raster() = default;
  Raster(int width, int height, int bands, GeoTransform geo = {}, T fill = T{})
      : width_(width), height_(height), bands_(bands), geo_(geo) {
    if (width < 1 || height < 1 || bands < 1 || !(geo.resolution > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "raster needs positive dimensions and resolution");
    }
    data_.assign(static_cast<std::size_t>(width) * height * bands, fill);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int bands() const noexcept { return bands_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * height_;
  }
  const GeoTransform& geo() const noexcept { return geo_; }
  void set_geo(const GeoTransform& geo) noexcept { geo_ = geo; }
  bool empty() const noexcept { return data_.empty(); }

  bool contains(int col, int row) const noexcept {
    return col >= 0 && row >= 0 && col < width_ && row < height_;
  }
  std::size_t index(int col, int row, int band = 0) const noexcept {
    return (static_cast<std::size_t>(row) * width_ + col) * bands_ + band;
  }

  T& at(int col, int row, int band = 0) noexcept { return data_[index(col, row, band)]; }
  const T& at(int col, int row, int band = 0) const noexcept {
    return data_[index(col, row, band)];
  }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int bands_ = 0;
  GeoTransform geo_{};
  std::vector<T> data_;
};

using ImageU8 = Raster<std::uint8_t>;
using BinaryMask = Raster<std::uint8_t>;  // values in {0, 1}

// Label 0 is background; segments are 1..count.
struct LabeledMask {
  Raster<std::uint32_t> raster;
  std::uint32_t count = 0;

  friend bool operator==(const LabeledMask&, const LabeledMask&) = default;
};

}  // namespace georeg
