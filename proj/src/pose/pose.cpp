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

#include "georeg/pose/pose.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <spdlog/spdlog.h>

namespace georeg::pose {

Normalization normalize_points(std::span<const Correspondence32> corr) {
  const std::size_t n = corr.size();
  if (n < 2) throw Error(ErrorCode::kDegenerateConfiguration, "normalization needs two points");
  Vec2 c2 = Vec2::Zero();
  Point3 c3 = Point3::Zero();
  for (const auto& c : corr) {
    c2 += c.x;
    c3 += c.X;
  }
  c2 /= static_cast<double>(n);
  c3 /= static_cast<double>(n);
  double d2 = 0.0, d3 = 0.0;
  for (const auto& c : corr) {
    d2 += (c.x - c2).squaredNorm();
    d3 += (c.X - c3).squaredNorm();
  }
  const double rms2 = std::sqrt(d2 / static_cast<double>(n));
  const double rms3 = std::sqrt(d3 / static_cast<double>(n));
  if (!(rms2 > 1e-12 * (1.0 + c2.norm())) || !(rms3 > 1e-12 * (1.0 + c3.norm()))) {
    throw Error(ErrorCode::kDegenerateConfiguration, "points are coincident");
  }
  Normalization out;
  const double s2 = std::sqrt(2.0) / rms2;
  const double s3 = std::sqrt(3.0) / rms3;
  out.t2d << s2, 0, -s2 * c2.x(), 0, s2, -s2 * c2.y(), 0, 0, 1;
  out.t3d.setIdentity();
  out.t3d.topLeftCorner<3, 3>() *= s3;
  out.t3d.topRightCorner<3, 1>() = -s3 * c3;
  out.points.reserve(n);
  for (const auto& c : corr) out.points.push_back({s3 * (c.X - c3), s2 * (c.x - c2)});
  return out;
}

Params to_params(const Mat34& p) {
  Params out;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) out(4 * r + c) = p(r, c);
  }
  return out;
}

Mat34 from_params(const Params& p) {
  Mat34 out;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) out(r, c) = p(4 * r + c);
  }
  return out;
}

namespace {

Mat34 denormalize(const Mat34& pn, const Normalization& n) {
  return n.t2d.inverse() * pn * n.t3d;
}

}  // namespace

ProjectionMatrix dlt(std::span<const Correspondence32> corr) {
  if (corr.size() < kMinCorrespondences) {
    throw Error(ErrorCode::kTooFewPoints, "DLT needs at least six correspondences");
  }
  const Normalization norm = normalize_points(corr);
  const std::size_t n = norm.points.size();

  Eigen::MatrixX3d centred(n, 3);
  for (std::size_t i = 0; i < n; ++i) centred.row(i) = norm.points[i].X.transpose();
  const Eigen::Vector3d spread = Eigen::JacobiSVD<Eigen::MatrixX3d>(centred).singularValues();
  if (!(spread(2) > 1e-6 * spread(0))) {
    throw Error(ErrorCode::kDegenerateConfiguration, "world points are coplanar or collinear");
  }

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 12);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::RowVector4d xh = norm.points[i].X.homogeneous().transpose();
    const double u = norm.points[i].x.x();
    const double v = norm.points[i].x.y();
    a.block<1, 4>(2 * i, 0) = xh;
    a.block<1, 4>(2 * i, 8) = -u * xh;
    a.block<1, 4>(2 * i + 1, 4) = xh;
    a.block<1, 4>(2 * i + 1, 8) = -v * xh;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Params p = svd.matrixV().col(11);
  return ProjectionMatrix(denormalize(from_params(p), norm)).normalized();
}

Eigen::VectorXd reprojection_residuals(const Params& p, std::span<const Correspondence32> corr) {
  const Mat34 m = from_params(p);
  Eigen::VectorXd r(2 * corr.size());
  for (std::size_t i = 0; i < corr.size(); ++i) {
    const Eigen::Vector3d h = m * corr[i].X.homogeneous();
    r(2 * i) = h.x() / h.z() - corr[i].x.x();
    r(2 * i + 1) = h.y() / h.z() - corr[i].x.y();
  }
  return r;
}

Eigen::MatrixXd reprojection_jacobian(const Params& p, std::span<const Correspondence32> corr) {
  const Mat34 m = from_params(p);
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * corr.size(), 12);
  for (std::size_t i = 0; i < corr.size(); ++i) {
    const Eigen::Vector4d xh = corr[i].X.homogeneous();
    const Eigen::Vector3d h = m * xh;
    const double w = h.z();
    j.block<1, 4>(2 * i, 0) = xh.transpose() / w;
    j.block<1, 4>(2 * i, 8) = -h.x() / (w * w) * xh.transpose();
    j.block<1, 4>(2 * i + 1, 4) = xh.transpose() / w;
    j.block<1, 4>(2 * i + 1, 8) = -h.y() / (w * w) * xh.transpose();
  }
  return j;
}

Decomposition decompose_projection(const ProjectionMatrix& p) {
  Mat34 m = p.matrix();
  Mat3 left = m.leftCols<3>();
  const double det = left.determinant();
  if (!std::isfinite(det) || std::abs(det) <= 1e-14 * std::pow(left.norm(), 3)) {
    throw Error(ErrorCode::kDegenerateConfiguration, "projection matrix has a singular 3x3 block");
  }
  if (det < 0) {
    m = -m;
    left = -left;
  }
  // RQ through QR of the row-reversed transpose.
  Mat3 flip;
  flip << 0, 0, 1, 0, 1, 0, 1, 0, 0;
  Eigen::HouseholderQR<Mat3> qr((flip * left).transpose());
  const Mat3 q = qr.householderQ();
  const Mat3 upper = qr.matrixQR().triangularView<Eigen::Upper>();
  Mat3 k = flip * upper.transpose() * flip;
  Mat3 r = flip * q.transpose();
  const Eigen::Vector3d signs(k(0, 0) < 0 ? -1.0 : 1.0, k(1, 1) < 0 ? -1.0 : 1.0, k(2, 2) < 0 ? -1.0 : 1.0);
  k = k * signs.asDiagonal();
  r = signs.asDiagonal() * r;

  Decomposition out;
  out.center = -left.inverse() * m.col(3);
  out.k = k / k(2, 2);
  out.r = r;
  const Opk a = opk_from_rotation(r);
  out.pose.x0 = out.center.x();
  out.pose.y0 = out.center.y();
  out.pose.z0 = out.center.z();
  out.pose.omega = a.omega;
  out.pose.phi = a.phi;
  out.pose.kappa = a.kappa;
  out.pose.focal = 0.5 * (out.k(0, 0) + out.k(1, 1));
  out.pose.u0 = out.k(0, 2);
  out.pose.v0 = out.k(1, 2);
  return out;
}

std::vector<double> point_residuals(const ProjectionMatrix& p, std::span<const Correspondence32> corr) {
  const Eigen::VectorXd r = reprojection_residuals(to_params(p.matrix()), corr);
  std::vector<double> out(corr.size());
  for (std::size_t i = 0; i < corr.size(); ++i) out[i] = std::hypot(r(2 * i), r(2 * i + 1));
  return out;
}

double rms(std::span<const double> residuals) {
  if (residuals.empty()) return 0.0;
  double s = 0.0;
  for (double r : residuals) s += r * r;
  return std::sqrt(s / static_cast<double>(residuals.size()));
}

PoseEstimate gold_standard(std::span<const Correspondence32> corr, const ProjectionMatrix& init,
                           const GoldStandardOptions& options) {
  if (corr.size() < kMinCorrespondences) {
    throw Error(ErrorCode::kTooFewPoints, "Gold Standard needs at least six correspondences");
  }
  if (!init.matrix().allFinite() || init.matrix().norm() == 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "initial projection matrix is not valid");
  }
  const Normalization norm = normalize_points(corr);
  // Initial estimate mapped into normalized coordinates.
  Mat34 pn = norm.t2d * init.matrix() * norm.t3d.inverse();
  Params p = to_params(pn).normalized();

  auto cost_of = [&](const Params& q) { return reprojection_residuals(q, norm.points).squaredNorm(); };
  double cost = cost_of(p);
  const double floor = 1e-28 * static_cast<double>(corr.size());

  PoseEstimate est;
  est.converged = false;
  double lambda = -1.0;
  int it = 0;
  if (!(cost > floor)) est.converged = true;
  for (; it < options.max_iterations && !est.converged; ++it) {
    const Eigen::MatrixXd j = reprojection_jacobian(p, norm.points);
    const Eigen::VectorXd r = reprojection_residuals(p, norm.points);
    const Eigen::Matrix<double, 12, 12> a = j.transpose() * j;
    const Params g = j.transpose() * r;
    if (lambda < 0) lambda = 1e-3 * a.diagonal().mean();
    bool accepted = false;
    while (!accepted) {
      Eigen::Matrix<double, 12, 12> damped = a;
      damped.diagonal().array() += lambda;
      const Params step = damped.ldlt().solve(-g);
      const Params trial = (p + step).normalized();
      const double trial_cost = cost_of(trial);
      if (std::isfinite(trial_cost) && trial_cost < cost) {
        const double rel = (cost - trial_cost) / cost;
        p = trial;
        cost = trial_cost;
        lambda = std::max(lambda / 10.0, 1e-300);
        accepted = true;
        if (rel < options.rel_tol || !(cost > floor)) est.converged = true;
      } else {
        lambda *= 10.0;
        // No descent even for tiny steps: a numerical minimum.
        if (lambda > 1e12 * (1.0 + a.diagonal().maxCoeff())) {
          est.converged = true;
          break;
        }
      }
    }
  }
  est.iterations = it;
  est.p = ProjectionMatrix(denormalize(from_params(p), norm)).normalized();
  est.residuals = point_residuals(est.p, corr);
  est.rms = rms(est.residuals);
  est.initial_rms = rms(point_residuals(init, corr));
  const Decomposition d = decompose_projection(est.p);
  est.pose = d.pose;
  est.k = d.k;
  if (!est.converged) {
    spdlog::warn("Gold Standard stopped after {} iterations without converging", it);
  }
  spdlog::debug("Gold Standard: {} iterations, rms {:.4f} px (initial {:.4f})", it, est.rms, est.initial_rms);
  return est;
}

PoseEstimate estimate_pose(std::span<const Correspondence32> corr, const GoldStandardOptions& options) {
  return gold_standard(corr, dlt(corr), options);
}

Mat3 center_covariance(std::span<const Correspondence32> corr, const ProjectionMatrix& p, double sigma) {
  const Normalization norm = normalize_points(corr);
  const Params pn = to_params(norm.t2d * p.matrix() * norm.t3d.inverse()).normalized();
  const Eigen::MatrixXd j = reprojection_jacobian(pn, norm.points);
  const double s2 = norm.t2d(0, 0);
  const Eigen::Matrix<double, 12, 12> info = j.transpose() * j;
  // The overall scale of P is unobservable; the pseudo-inverse drops it.
  Eigen::JacobiSVD<Eigen::Matrix<double, 12, 12>> svd(info, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix<double, 12, 1> inv = Eigen::Matrix<double, 12, 1>::Zero();
  const auto sv = svd.singularValues();
  for (int i = 0; i < 11; ++i) inv(i) = 1.0 / sv(i);
  const Eigen::Matrix<double, 12, 12> cov_p =
      (sigma * s2) * (sigma * s2) * svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();

  auto center = [&](const Params& q) {
    const Mat34 m = denormalize(from_params(q), norm);
    return Eigen::Vector3d(-m.leftCols<3>().inverse() * m.col(3));
  };
  Eigen::Matrix<double, 3, 12> g;
  for (int i = 0; i < 12; ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(pn(i)));
    Params up = pn, dn = pn;
    up(i) += h;
    dn(i) -= h;
    g.col(i) = (center(up) - center(dn)) / (2 * h);
  }
  return g * cov_p * g.transpose();
}

}  // namespace georeg::pose
