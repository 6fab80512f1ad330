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

#include <random>

#include "georeg/core/camera.hpp"
#include "georeg/core/geometry.hpp"
#include "georeg/core/regions.hpp"
#include "georeg/pose/pose.hpp"
#include "oracles.hpp"

using namespace georeg;

TEST_CASE("geotransform round-trips pixel centers exactly") {
  const GeoTransform g{320000.5, 5180000.25, 0.5};
  for (int r = 0; r < 50; ++r) {
    for (int c = 0; c < 50; ++c) {
      const Vec2 w = g.world(c, r);
      const Vec2 p = g.pixel(w.x(), w.y());
      CHECK(p.x() == c);
      CHECK(p.y() == r);
      const PixelIndex cell = g.cell(w.x(), w.y());
      CHECK(cell == PixelIndex{c, r});
    }
  }
  CHECK(g.world(0, 1).y() < g.world(0, 0).y());
}

TEST_CASE("raster rejects empty dimensions") {
  CHECK_THROWS_AS(Raster<int>(0, 3, 1), Error);
  Raster<int> r(3, 2, 2, {}, 7);
  CHECK(r.at(2, 1, 1) == 7);
  CHECK(r.index(1, 1, 1) == (1 * 3 + 1) * 2 + 1);
}

TEST_CASE("rotation_from_opk examples") {
  CHECK((rotation_from_opk(0, 0, 0) - Mat3::Identity()).norm() == 0.0);
  const Mat3 rz = rotation_from_opk(0, 0, M_PI / 2);
  CHECK((rz * Eigen::Vector3d::UnitX() - Eigen::Vector3d::UnitY()).norm() < 1e-15);
  const Mat3 r = rotation_from_opk(0.1, 0.2, 0.3);
  // Independent product of the three elementary rotations.
  auto rx = [](double a) { Mat3 m; m << 1, 0, 0, 0, std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a); return m; };
  auto ry = [](double a) { Mat3 m; m << std::cos(a), 0, std::sin(a), 0, 1, 0, -std::sin(a), 0, std::cos(a); return m; };
  auto rzf = [](double a) { Mat3 m; m << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1; return m; };
  CHECK((r - rzf(0.3) * ry(0.2) * rx(0.1)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("rotation_from_opk is orthonormal for random angles and inverts") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> a(-M_PI, M_PI), p(-1.5, 1.5);
  for (int i = 0; i < 1000; ++i) {
    const double om = a(rng), ph = p(rng), ka = a(rng);
    const Mat3 r = rotation_from_opk(om, ph, ka);
    REQUIRE((r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(r.determinant() == doctest::Approx(1.0).epsilon(1e-12));
    const Opk back = opk_from_rotation(r);
    CHECK((rotation_from_opk(back.omega, back.phi, back.kappa) - r).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(back.phi == doctest::Approx(ph).epsilon(1e-9));
  }
}

TEST_CASE("canonical camera projections") {
  CameraPose c;  // origin, identity rotation, focal 1, principal point 0
  const ProjectionMatrix p = compose_projection(c);
  CHECK((p.matrix() - (Mat34() << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0).finished()).norm() == 0.0);
  CHECK((project_point(p, {0, 0, 1}) - Vec2(0, 0)).norm() == 0.0);
  CHECK((project_point(p, {1, 0, 1}) - Vec2(1, 0)).norm() == 0.0);
  CHECK((project_point(p, {0, 0, 2}) - Vec2(0, 0)).norm() == 0.0);
  CHECK((project_point(p, {2, 2, 2}) - Vec2(1, 1)).norm() == 0.0);
  CHECK_THROWS_AS(project_point(p, {1, 1, 0}), Error);
  try {
    project_point(p, {1, 1, 1e-20});
    FAIL("expected PointAtInfinity");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kPointAtInfinity);
  }
}

TEST_CASE("nadir camera maps ground like a north-up image") {
  CameraPose c;
  c.x0 = 1000;
  c.y0 = 2000;
  c.z0 = 500;
  c.omega = M_PI;
  c.focal = 1000;
  c.u0 = 50;
  c.v0 = 40;
  const ProjectionMatrix p = compose_projection(c);
  // u = u0 + f (X - X0) / (Z0 - Z), v = v0 - f (Y - Y0) / (Z0 - Z)
  const Vec2 uv = project_point(p, {1010, 2020, 0});
  CHECK(uv.x() == doctest::Approx(50 + 1000.0 * 10 / 500));
  CHECK(uv.y() == doctest::Approx(40 - 1000.0 * 20 / 500));
}

TEST_CASE("compose then decompose recovers random poses") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(-1000, 1000), ang(-3.0, 3.0), ph(-1.4, 1.4);
  for (int i = 0; i < 200; ++i) {
    CameraPose c;
    c.x0 = pos(rng);
    c.y0 = pos(rng);
    c.z0 = pos(rng);
    c.omega = ang(rng);
    c.phi = ph(rng);
    c.kappa = ang(rng);
    c.focal = 500 + std::abs(pos(rng));
    c.u0 = pos(rng) / 10;
    c.v0 = pos(rng) / 10;
    const ProjectionMatrix p = compose_projection(c);
    const pose::Decomposition d = pose::decompose_projection(ProjectionMatrix(-3.7 * p.matrix()));
    CHECK((d.center - c.center()).norm() < 1e-9);
    const Mat3 r = rotation_from_opk(c.omega, c.phi, c.kappa);
    const Mat3 rd = rotation_from_opk(d.pose.omega, d.pose.phi, d.pose.kappa);
    CHECK((r - rd).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(std::abs(std::remainder(d.pose.phi - c.phi, 2 * M_PI)) < 1e-9);
    CHECK(std::abs(std::remainder(d.pose.omega - c.omega, 2 * M_PI)) < 1e-9);
    CHECK(std::abs(std::remainder(d.pose.kappa - c.kappa, 2 * M_PI)) < 1e-9);
    CHECK(d.pose.focal == doctest::Approx(c.focal).epsilon(1e-9));
  }
}

TEST_CASE("label_components matches union-find oracle") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    Raster<std::uint32_t> v(40, 30, 1);
    std::uniform_int_distribution<int> val(0, 3);
    for (auto& x : v.data()) x = static_cast<std::uint32_t>(val(rng));
    const LabeledMask m = label_components(v);
    const auto expect = oracle::label(v);
    REQUIRE(m.raster.data().size() == expect.size());
    CHECK(std::equal(expect.begin(), expect.end(), m.raster.data().begin()));
    CHECK(m.count == *std::max_element(expect.begin(), expect.end()));
  }
}

TEST_CASE("filter_labels renumbers in order") {
  Raster<std::uint32_t> v(5, 1, 1);
  const std::uint32_t vals[] = {1, 0, 2, 0, 3};
  std::copy(vals, vals + 5, v.data().begin());
  const LabeledMask m = label_components(v);
  REQUIRE(m.count == 3);
  const LabeledMask f = filter_labels(m, [](std::uint32_t l) { return l != 2; });
  CHECK(f.count == 2);
  CHECK(f.raster.at(0, 0) == 1);
  CHECK(f.raster.at(2, 0) == 0);
  CHECK(f.raster.at(4, 0) == 2);
  const auto areas = label_areas(f);
  CHECK(areas[0] == 3);
  CHECK(areas[1] == 1);
  const auto px = label_pixels(f);
  CHECK(px[1][0] == PixelIndex{4, 0});
}

TEST_CASE("convex hull keeps only extreme vertices counter-clockwise") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int t = 0; t < 100; ++t) {
    std::vector<Vec2> pts;
    for (int i = 0; i < 40; ++i) pts.emplace_back(u(rng), u(rng));
    const auto hull = convex_hull(pts);
    REQUIRE(hull.size() >= 3);
    CHECK(signed_area(hull) > 0);
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const Vec2 a = hull[i], b = hull[(i + 1) % hull.size()];
      for (const Vec2& p : pts) {
        const double cr = (b - a).x() * (p - a).y() - (b - a).y() * (p - a).x();
        CHECK(cr >= -1e-9);
      }
    }
  }
  CHECK(convex_hull({{0, 0}, {1, 0}, {2, 0}, {2, 1}, {0, 1}}).size() == 4);
}

TEST_CASE("min_area_rect against exhaustive rotation search") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-20, 20);
  for (int t = 0; t < 100; ++t) {
    std::vector<Vec2> pts;
    for (int i = 0; i < 30; ++i) pts.emplace_back(u(rng), 0.3 * u(rng));
    const auto hull = convex_hull(pts);
    const OrientedRect r = min_area_rect(hull);
    const double brute = oracle::exhaustive_rect_area(pts);
    CHECK(r.area <= brute * (1 + 1e-9));
    CHECK(r.area >= brute * (1 - 0.005));
    CHECK(r.length >= r.width);
    CHECK(r.angle >= 0.0);
    CHECK(r.angle < M_PI);
    // Contains every hull vertex.
    for (const Vec2& p : hull) {
      bool inside = true;
      for (int i = 0; i < 4; ++i) {
        const Vec2 a = r.corners[i], b = r.corners[(i + 1) % 4];
        const double cr = (b - a).x() * (p - a).y() - (b - a).y() * (p - a).x();
        const double orient = signed_area(std::span<const Vec2>(r.corners.data(), 4)) > 0 ? 1.0 : -1.0;
        if (orient * cr < -1e-9) inside = false;
      }
      CHECK(inside);
    }
  }
}

TEST_CASE("pixel_square_corners spans the same hull as all corners") {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 50; ++t) {
    const BinaryMask m = oracle::blobby_mask(rng, 20, 20, 0.5);
    std::vector<PixelIndex> px;
    for (int r = 0; r < 20; ++r) {
      for (int c = 0; c < 20; ++c) {
        if (m.at(c, r)) px.push_back({c, r});
      }
    }
    if (px.empty()) continue;
    const double a = signed_area(convex_hull(pixel_square_corners(px)));
    const double b = signed_area(convex_hull(oracle::all_corners(px)));
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("point_in_polygon and signed_area") {
  const std::vector<Vec2> sq{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  CHECK(signed_area(sq) == 4.0);
  CHECK(point_in_polygon({1, 1}, sq));
  CHECK_FALSE(point_in_polygon({3, 1}, sq));
  const std::vector<Vec2> cw(sq.rbegin(), sq.rend());
  CHECK(signed_area(cw) == -4.0);
}
