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

#include "georeg/core/camera.hpp"

#include <algorithm>
#include <cmath>

namespace georeg {

Mat3 rotation_from_opk(double omega, double phi, double kappa) {
  const double co = std::cos(omega), so = std::sin(omega);
  const double cp = std::cos(phi), sp = std::sin(phi);
  const double ck = std::cos(kappa), sk = std::sin(kappa);
  Mat3 rx, ry, rz;
  rx << 1, 0, 0, 0, co, -so, 0, so, co;
  ry << cp, 0, sp, 0, 1, 0, -sp, 0, cp;
  rz << ck, -sk, 0, sk, ck, 0, 0, 0, 1;
  return rz * ry * rx;
}

Opk opk_from_rotation(const Mat3& r) {
  Opk out;
  const double s = std::clamp(-r(2, 0), -1.0, 1.0);
  out.phi = std::asin(s);
  if (std::abs(s) < 1.0 - 1e-12) {
    out.omega = std::atan2(r(2, 1), r(2, 2));
    out.kappa = std::atan2(r(1, 0), r(0, 0));
  } else {
    out.kappa = 0.0;
    out.omega = std::atan2(-r(1, 2), r(1, 1));
  }
  return out;
}

Mat3 intrinsics(const CameraPose& pose) {
  Mat3 k;
  k << pose.focal, 0, pose.u0, 0, pose.focal, pose.v0, 0, 0, 1;
  return k;
}

ProjectionMatrix compose_projection(const CameraPose& pose) {
  const Mat3 r = rotation_from_opk(pose.omega, pose.phi, pose.kappa);
  Mat34 rt;
  rt.leftCols<3>() = r;
  rt.col(3) = -r * pose.center();
  return ProjectionMatrix(intrinsics(pose) * rt);
}

Vec2 project_point(const ProjectionMatrix& p, const Point3& x, double w_tolerance) {
  const Eigen::Vector3d h = p.matrix() * x.homogeneous();
  if (!(std::abs(h.z()) > w_tolerance * h.norm())) {
    throw Error(ErrorCode::kPointAtInfinity, "point lies on the principal plane");
  }
  return {h.x() / h.z(), h.y() / h.z()};
}

}  // namespace georeg
