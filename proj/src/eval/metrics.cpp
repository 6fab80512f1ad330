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

#include "georeg/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "georeg/simd/kernels.hpp"

namespace georeg::eval {

PrecisionRecall precision_recall(const Tally& t) {
  if (t.tp < 0 || t.fa < 0 || t.m < 0) throw Error(ErrorCode::kInvalidArgument, "negative tally");
  if (t.tp + t.fa == 0 || t.tp + t.m == 0) {
    throw Error(ErrorCode::kUndefinedMetric, "precision or recall has a zero denominator");
  }
  return {100.0 * static_cast<double>(t.tp) / static_cast<double>(t.tp + t.fa),
          100.0 * static_cast<double>(t.tp) / static_cast<double>(t.tp + t.m)};
}

Tally tally_pairs(std::span<const std::pair<std::uint32_t, std::uint32_t>> found,
                  std::span<const std::pair<std::uint32_t, std::uint32_t>> truth) {
  const std::set<std::pair<std::uint32_t, std::uint32_t>> t(truth.begin(), truth.end());
  const std::set<std::pair<std::uint32_t, std::uint32_t>> f(found.begin(), found.end());
  Tally out;
  for (const auto& p : f) (t.count(p) ? out.tp : out.fa)++;
  for (const auto& p : t) {
    if (!f.count(p)) ++out.m;
  }
  return out;
}

double relative_shift(std::span<const ControlPointPair> pairs) {
  if (pairs.empty()) throw Error(ErrorCode::kEmptyList, "no control point pairs");
  double s = 0.0;
  for (const auto& p : pairs) s += (p.image - p.lidar).norm();
  return s / static_cast<double>(pairs.size());
}

double shift_gain(double before, double after) {
  if (!(before > 0.0)) throw Error(ErrorCode::kZeroBefore, "shift before registration must be positive");
  return (before - after) / before * 100.0;
}

Vec2 back_project_to_plane(const ProjectionMatrix& p, const Vec2& pixel, double z) {
  const Mat34& m = p.matrix();
  const Eigen::RowVector4d r1 = m.row(0) - pixel.x() * m.row(2);
  const Eigen::RowVector4d r2 = m.row(1) - pixel.y() * m.row(2);
  Eigen::Matrix2d a;
  a << r1(0), r1(1), r2(0), r2(1);
  const Eigen::Vector2d b(-(r1(2) * z + r1(3)), -(r2(2) * z + r2(3)));
  const double det = a.determinant();
  if (!(std::abs(det) > 1e-14 * a.squaredNorm())) {
    throw Error(ErrorCode::kDegenerateConfiguration, "viewing ray is parallel to the plane");
  }
  return a.inverse() * b;
}

std::vector<ControlPointPair> pairs_from_georef(std::span<const ControlPoint> cps, const GeoTransform& geo) {
  std::vector<ControlPointPair> out;
  out.reserve(cps.size());
  for (const auto& c : cps) out.push_back({geo.world(c.pixel.x(), c.pixel.y()), c.world.head<2>()});
  return out;
}

std::vector<ControlPointPair> pairs_from_projection(std::span<const ControlPoint> cps,
                                                    const ProjectionMatrix& p) {
  std::vector<ControlPointPair> out;
  out.reserve(cps.size());
  for (const auto& c : cps) out.push_back({back_project_to_plane(p, c.pixel, c.world.z()), c.world.head<2>()});
  return out;
}

std::array<std::uint8_t, 3> color_ramp(double t) {
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
  return {static_cast<std::uint8_t>(std::lround(255.0 * t)), 0,
          static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - t)))};
}

ImageU8 render_overlay(const ImageU8& image, const PointCloud& cloud, const ProjectionMatrix& p,
                       ColorBy color_by) {
  ImageU8 out = image;
  if (image.bands() != 3) {
    out = ImageU8(image.width(), image.height(), 3, image.geo());
    for (int r = 0; r < image.height(); ++r) {
      for (int c = 0; c < image.width(); ++c) {
        for (int b = 0; b < 3; ++b) out.at(c, r, b) = image.at(c, r, std::min(b, image.bands() - 1));
      }
    }
  }
  const std::size_t n = cloud.size();
  if (n == 0) return out;

  double lo = 0.0, hi = 255.0;
  const bool by_z = color_by == ColorBy::kElevation || !cloud.has_intensity();
  if (by_z) {
    lo = hi = cloud.points[0].z();
    for (const Point3& q : cloud.points) {
      lo = std::min(lo, q.z());
      hi = std::max(hi, q.z());
    }
  }
  const double span = hi > lo ? hi - lo : 1.0;

  std::vector<double> xyz(3 * n), uv(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    xyz[3 * i] = cloud.points[i].x();
    xyz[3 * i + 1] = cloud.points[i].y();
    xyz[3 * i + 2] = cloud.points[i].z();
  }
  Eigen::Matrix<double, 3, 4, Eigen::RowMajor> pm = p.matrix();
  // Points behind the camera have the opposite sign of w to points in front.
  double sign = 1.0;
  if (pm.leftCols<3>().determinant() < 0) sign = -1.0;
  simd::kernels().project_points(pm.data(), xyz.data(), n, uv.data());
  for (std::size_t i = 0; i < n; ++i) {
    const double w = sign * (pm.row(2).head<3>().dot(cloud.points[i]) + pm(2, 3));
    if (!(w > 0.0)) continue;
    const double u = uv[2 * i], v = uv[2 * i + 1];
    if (!std::isfinite(u) || !std::isfinite(v)) continue;
    const double col = std::floor(u + 0.5), row = std::floor(v + 0.5);
    if (col < 0 || row < 0 || col >= out.width() || row >= out.height()) continue;
    const double t = by_z ? (cloud.points[i].z() - lo) / span : cloud.intensity[i] / 255.0;
    const auto rgb = color_ramp(t);
    for (int b = 0; b < 3; ++b) out.at(static_cast<int>(col), static_cast<int>(row), b) = rgb[b];
  }
  return out;
}

ProjectionMatrix georef_camera(const GeoTransform& geo) {
  Mat34 m = Mat34::Zero();
  m(0, 0) = 1.0 / geo.resolution;
  m(0, 3) = -geo.origin_x / geo.resolution;
  m(1, 1) = -1.0 / geo.resolution;
  m(1, 3) = geo.origin_y / geo.resolution;
  m(2, 3) = 1.0;
  return ProjectionMatrix(m);
}

}  // namespace georeg::eval
