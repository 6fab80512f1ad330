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

#include <Eigen/Core>

#include "georeg/core/types.hpp"

namespace georeg {

using Mat3 = Eigen::Matrix3d;
using Mat34 = Eigen::Matrix<double, 3, 4>;

// Exterior orientation plus a square-pixel, zero-skew interior orientation.
// Angles are radians; the rotation maps world axes into camera axes.
struct CameraPose {
  double x0 = 0.0;
  double y0 = 0.0;
  double z0 = 0.0;
  double omega = 0.0;
  double phi = 0.0;
  double kappa = 0.0;
  double focal = 1.0;
  double u0 = 0.0;
  double v0 = 0.0;

  Point3 center() const { return {x0, y0, z0}; }
};

// 3x4 finite projective camera, defined up to scale.
class ProjectionMatrix {
 public:
  ProjectionMatrix() : m_(Mat34::Zero()) {}
  explicit ProjectionMatrix(const Mat34& m) : m_(m) {}

  const Mat34& matrix() const noexcept { return m_; }

  // Scale to unit Frobenius norm. Sign is left untouched.
  ProjectionMatrix normalized() const { return ProjectionMatrix(m_ / m_.norm()); }

 private:
  Mat34 m_;
};

// R = Rz(kappa) * Ry(phi) * Rx(omega).
Mat3 rotation_from_opk(double omega, double phi, double kappa);

struct Opk {
  double omega = 0.0;
  double phi = 0.0;
  double kappa = 0.0;
};

// Inverse of rotation_from_opk for |phi| < pi/2. At the gimbal-lock
// singularity kappa is set to 0 and omega absorbs the remaining rotation.
Opk opk_from_rotation(const Mat3& r);

Mat3 intrinsics(const CameraPose& pose);

// P = K [R | -R C].
ProjectionMatrix compose_projection(const CameraPose& pose);

// Pixel coordinates of a world point. Integer (u, v) are pixel centers.
// Throws kPointAtInfinity when the homogeneous scale is below `w_tolerance`
// relative to the magnitude of the projected vector.
Vec2 project_point(const ProjectionMatrix& p, const Point3& x, double w_tolerance = 1e-12);

}  // namespace georeg
