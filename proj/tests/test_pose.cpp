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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "georeg/pose/pose.hpp"

using namespace georeg;
using namespace georeg::pose;

namespace {

CameraPose test_camera() {
  CameraPose c;
  c.x0 = 120;
  c.y0 = -40;
  c.z0 = 600;
  c.omega = std::numbers::pi - 0.12;
  c.phi = 0.08;
  c.kappa = 0.5;
  c.focal = 1800;
  c.u0 = 960;
  c.v0 = 540;
  return c;
}

std::vector<Correspondence32> synth(const ProjectionMatrix& p, int n, std::mt19937_64& rng,
                                    double noise = 0.0) {
  std::uniform_real_distribution<double> xy(-200, 200), z(0, 60);
  std::normal_distribution<double> e(0, noise > 0 ? noise : 1);
  std::vector<Correspondence32> c;
  for (int i = 0; i < n; ++i) {
    const Point3 X(xy(rng), xy(rng), z(rng));
    Vec2 x = project_point(p, X);
    if (noise > 0) x += Vec2(e(rng), e(rng));
    c.push_back({X, x});
  }
  return c;
}

double proportional_error(const Mat34& a, const Mat34& b) {
  const Mat34 na = a / a.norm();
  Mat34 nb = b / b.norm();
  if ((na - nb).norm() > (na + nb).norm()) nb = -nb;
  return (na - nb).norm();
}

}  // namespace

TEST_CASE("normalization examples") {
  std::vector<Correspondence32> c;
  // Image points already centered at RMS sqrt(2): unit square corners.
  const Vec2 sq[4] = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};
  for (int i = 0; i < 4; ++i) c.push_back({Point3(i, 2 * i, i * i), sq[i]});
  const Normalization n = normalize_points(c);
  CHECK((n.t2d - Mat3::Identity()).norm() < 1e-15);

  std::vector<Correspondence32> cl;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0, 3);
  for (int i = 0; i < 10; ++i) cl.push_back({Point3(g(rng), g(rng), g(rng)), Vec2(100 + g(rng), 200 + g(rng))});
  const Normalization m = normalize_points(cl);
  const double s = m.t2d(0, 0);
  CHECK(m.t2d(0, 2) == doctest::Approx(-100 * s).epsilon(0.1));
  CHECK(m.t2d(1, 2) == doctest::Approx(-200 * s).epsilon(0.1));

  std::vector<Correspondence32> same(5, {Point3(1, 2, 3), Vec2(4, 5)});
  try {
    normalize_points(same);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateConfiguration);
  }
}

TEST_CASE("normalized statistics") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1000, 5000);
  for (int t = 0; t < 50; ++t) {
    std::vector<Correspondence32> c;
    for (int i = 0; i < 20; ++i) c.push_back({Point3(u(rng), u(rng), u(rng) / 10), Vec2(u(rng), u(rng))});
    const Normalization n = normalize_points(c);
    Vec2 m2 = Vec2::Zero();
    Point3 m3 = Point3::Zero();
    double r2 = 0, r3 = 0;
    for (const auto& p : n.points) {
      m2 += p.x;
      m3 += p.X;
      r2 += p.x.squaredNorm();
      r3 += p.X.squaredNorm();
    }
    CHECK(m2.norm() / 20 < 1e-12);
    CHECK(m3.norm() / 20 < 1e-12);
    CHECK(std::sqrt(r2 / 20) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(std::sqrt(r3 / 20) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    // The stored points are the transforms applied to the inputs.
    const Eigen::Vector3d h = n.t2d * c[3].x.homogeneous();
    CHECK((h.hnormalized() - n.points[3].x).norm() < 1e-12);
  }
}

TEST_CASE("DLT recovers noiseless cameras") {
  std::mt19937_64 rng(3);
  const ProjectionMatrix truth = compose_projection(test_camera());
  for (int n : {6, 20}) {
    const auto c = synth(truth, n, rng);
    const ProjectionMatrix p = dlt(c);
    CHECK(rms(point_residuals(p, c)) < 1e-8);
    CHECK(proportional_error(p.matrix(), truth.matrix()) < 1e-8);
  }
  try {
    dlt(synth(truth, 5, rng));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kTooFewPoints);
  }
}

TEST_CASE("coplanar world points are degenerate") {
  std::mt19937_64 rng(4);
  const ProjectionMatrix truth = compose_projection(test_camera());
  auto c = synth(truth, 12, rng);
  for (auto& p : c) {
    p.X.z() = 0;
    p.x = project_point(truth, p.X);
  }
  try {
    dlt(c);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateConfiguration);
  }
}

TEST_CASE("gold standard from the truth needs no iterations") {
  std::mt19937_64 rng(5);
  const ProjectionMatrix truth = compose_projection(test_camera());
  const auto c = synth(truth, 15, rng);
  const PoseEstimate e = gold_standard(c, truth);
  CHECK(e.iterations == 0);
  CHECK(e.converged);
  CHECK(e.rms < 1e-10);
}

TEST_CASE("gold standard from DLT recovers the camera") {
  std::mt19937_64 rng(6);
  const CameraPose cam = test_camera();
  const ProjectionMatrix truth = compose_projection(cam);
  const auto c = synth(truth, 20, rng);
  const PoseEstimate e = estimate_pose(c);
  CHECK(e.converged);
  CHECK(e.rms < 1e-6);
  CHECK((e.pose.center() - cam.center()).norm() < 1e-6);
  CHECK(e.pose.omega == doctest::Approx(cam.omega).epsilon(1e-8));
  CHECK(e.pose.phi == doctest::Approx(cam.phi).epsilon(1e-8));
  CHECK(e.pose.kappa == doctest::Approx(cam.kappa).epsilon(1e-8));
  CHECK(e.pose.focal == doctest::Approx(cam.focal).epsilon(1e-8));
  CHECK(e.residuals.size() == 20);
}

TEST_CASE("decompose then recompose is proportional to P") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 200; ++t) {
    CameraPose c;
    c.x0 = 500 * u(rng);
    c.y0 = 500 * u(rng);
    c.z0 = 1000 + 500 * u(rng);
    c.omega = std::numbers::pi * u(rng);
    c.phi = 1.4 * u(rng);
    c.kappa = std::numbers::pi * u(rng);
    c.focal = 1000 + 900 * u(rng);
    c.u0 = 500 + 100 * u(rng);
    c.v0 = 400 + 100 * u(rng);
    const double scale = (t % 2 ? -1 : 1) * (0.001 + 10 * std::abs(u(rng)));
    const ProjectionMatrix p(compose_projection(c).matrix() * scale);
    const Decomposition d = decompose_projection(p);
    CHECK(d.k(0, 0) > 0);
    CHECK(d.k(1, 1) > 0);
    CHECK(d.r.determinant() == doctest::Approx(1.0));
    CHECK((d.center - c.center()).norm() < 1e-6 * c.center().norm());
    CHECK(proportional_error(compose_projection(d.pose).matrix(), p.matrix()) < 1e-6);
  }
}

TEST_CASE("analytic Jacobian matches central differences") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 20; ++t) {
    Params p;
    for (int i = 0; i < 12; ++i) p(i) = u(rng);
    p(11) += 3;  // keep points in front
    std::vector<Correspondence32> c;
    for (int i = 0; i < 8; ++i) c.push_back({Point3(u(rng), u(rng), u(rng)), Vec2(u(rng), u(rng))});
    const Eigen::MatrixXd j = reprojection_jacobian(p, c);
    Eigen::MatrixXd fd(j.rows(), 12);
    for (int k = 0; k < 12; ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(p(k)));
      Params a = p, b = p;
      a(k) += h;
      b(k) -= h;
      fd.col(k) = (reprojection_residuals(a, c) - reprojection_residuals(b, c)) / (2 * h);
    }
    CHECK((j - fd).norm() <= 1e-5 * j.norm());
  }
}

TEST_CASE("scaling P changes neither reprojections nor the camera") {
  std::mt19937_64 rng(9);
  const ProjectionMatrix truth = compose_projection(test_camera());
  const auto c = synth(truth, 10, rng, 0.3);
  const Decomposition d1 = decompose_projection(truth);
  for (double s : {-3.0, 1e-4, 250.0}) {
    const ProjectionMatrix q(truth.matrix() * s);
    const auto r1 = point_residuals(truth, c), r2 = point_residuals(q, c);
    for (std::size_t i = 0; i < r1.size(); ++i) CHECK(r2[i] == doctest::Approx(r1[i]).epsilon(1e-9));
    const Decomposition d2 = decompose_projection(q);
    CHECK((d2.center - d1.center).norm() < 1e-9 * d1.center.norm());
    CHECK((d2.r - d1.r).norm() < 1e-9);
    CHECK((d2.k - d1.k).norm() < 1e-9 * d1.k.norm());
  }
}

TEST_CASE("gold standard never increases the error") {
  std::mt19937_64 rng(10);
  const ProjectionMatrix truth = compose_projection(test_camera());
  for (int t = 0; t < 20; ++t) {
    const auto c = synth(truth, 20, rng, 0.5);
    const ProjectionMatrix init = dlt(c);
    const double init_rms = rms(point_residuals(init, c));
    GoldStandardOptions opt;
    double prev = init_rms;
    // Truncated runs of increasing length trace the accepted iterates.
    for (int it = 1; it <= 6; ++it) {
      opt.max_iterations = it;
      const PoseEstimate e = gold_standard(c, init, opt);
      CHECK(e.initial_rms == doctest::Approx(init_rms));
      CHECK(e.rms <= prev + 1e-12);
      prev = e.rms;
    }
    // Expected point rms: sigma * sqrt((2n - 11) / n) = 0.60 px.
    CHECK(prev == doctest::Approx(0.5 * std::sqrt(29.0 / 20.0)).epsilon(0.35));
  }
}

TEST_CASE("camera center stays within the propagated noise bound") {
  const CameraPose cam = test_camera();
  const ProjectionMatrix truth = compose_projection(cam);
  int inside = 0;
  for (int seed = 0; seed < 30; ++seed) {
    std::mt19937_64 rng(1000 + seed);
    const auto c = synth(truth, 20, rng, 0.5);
    const PoseEstimate e = estimate_pose(c);
    const Mat3 cov = center_covariance(c, truth, 0.5);
    inside += (e.pose.center() - cam.center()).norm() <= 3 * std::sqrt(cov.trace());
  }
  CHECK(inside == 30);
}

TEST_CASE("center covariance matches Monte Carlo spread") {
  const CameraPose cam = test_camera();
  const ProjectionMatrix truth = compose_projection(cam);
  std::mt19937_64 rng(11);
  const auto base = synth(truth, 20, rng);
  const Mat3 cov = center_covariance(base, truth, 0.5);
  std::normal_distribution<double> e(0, 0.5);
  Mat3 mc = Mat3::Zero();
  const int runs = 300;
  for (int r = 0; r < runs; ++r) {
    auto c = base;
    for (auto& p : c) p.x += Vec2(e(rng), e(rng));
    const Point3 d = estimate_pose(c).pose.center() - cam.center();
    mc += d * d.transpose();
  }
  mc /= runs;
  CHECK(std::sqrt(mc.trace()) == doctest::Approx(std::sqrt(cov.trace())).epsilon(0.2));
}
