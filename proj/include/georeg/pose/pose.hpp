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

// Projection matrix estimation from 3D-2D correspondences: normalized DLT,
// Gold Standard refinement of the geometric error and decomposition into
// interior and exterior orientation.

#include <span>
#include <vector>

#include <Eigen/Core>

#include "georeg/core/camera.hpp"
#include "georeg/core/types.hpp"

namespace georeg::pose {

inline constexpr std::size_t kMinCorrespondences = 6;

struct Correspondence32 {
  Point3 X;  // world, meters
  Vec2 x;    // pixels
};

struct Normalization {
  Mat3 t2d = Mat3::Identity();
  Eigen::Matrix4d t3d = Eigen::Matrix4d::Identity();
  std::vector<Correspondence32> points;
};

// Centroid to the origin, RMS distance sqrt(2) in the image and sqrt(3) in
// the world. Throws kDegenerateConfiguration when either side collapses.
Normalization normalize_points(std::span<const Correspondence32> corr);

// Algebraic least squares on normalized coordinates. Throws kTooFewPoints
// below six correspondences and kDegenerateConfiguration for coplanar or
// collinear world points.
ProjectionMatrix dlt(std::span<const Correspondence32> corr);

using Params = Eigen::Matrix<double, 12, 1>;  // row-major P

Params to_params(const Mat34& p);
Mat34 from_params(const Params& p);

// Stacked (du, dv) reprojection residuals, 2n entries.
Eigen::VectorXd reprojection_residuals(const Params& p, std::span<const Correspondence32> corr);
// Analytic 2n x 12 Jacobian of reprojection_residuals.
Eigen::MatrixXd reprojection_jacobian(const Params& p, std::span<const Correspondence32> corr);

struct Decomposition {
  Mat3 k = Mat3::Identity();  // K(2,2) = 1, positive diagonal
  Mat3 r = Mat3::Identity();  // det = +1
  Point3 center = Point3::Zero();
  CameraPose pose;  // focal = mean of K(0,0) and K(1,1)
};

// RQ factorization of the left 3x3 block; throws kDegenerateConfiguration
// when it is singular.
Decomposition decompose_projection(const ProjectionMatrix& p);

struct GoldStandardOptions {
  int max_iterations = 200;
  double rel_tol = 1e-10;
};

struct PoseEstimate {
  ProjectionMatrix p;
  CameraPose pose;
  Mat3 k = Mat3::Identity();
  double rms = 0.0;  // pixels
  double initial_rms = 0.0;
  std::vector<double> residuals;  // per point, pixels
  int iterations = 0;
  bool converged = true;
};

// Levenberg-Marquardt over the 12 entries of P in normalized coordinates.
// Hitting max_iterations returns the best estimate with converged = false.
PoseEstimate gold_standard(std::span<const Correspondence32> corr, const ProjectionMatrix& init,
                           const GoldStandardOptions& options = {});

// DLT followed by gold_standard.
PoseEstimate estimate_pose(std::span<const Correspondence32> corr,
                           const GoldStandardOptions& options = {});

// First-order covariance of the camera center for isotropic pixel noise
// `sigma`, propagated through the normal equations at `p`.
Mat3 center_covariance(std::span<const Correspondence32> corr, const ProjectionMatrix& p, double sigma);

std::vector<double> point_residuals(const ProjectionMatrix& p, std::span<const Correspondence32> corr);
double rms(std::span<const double> residuals);

}  // namespace georeg::pose
