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
#include <random>

#include "georeg/eval/metrics.hpp"
#include "georeg/synth/scene.hpp"

using namespace georeg;
using namespace georeg::eval;

namespace {

double round2(double v) { return std::round(v * 100.0) / 100.0; }

}  // namespace

TEST_CASE("precision and recall from published tallies") {
  struct Row {
    Tally t;
    double p, r;
  };
  const Row rows[] = {{{28, 0, 0}, 100.00, 100.00},
                      {{24, 21, 4}, 53.33, 85.71},
                      {{8, 0, 12}, 100.00, 40.00},
                      {{19, 7, 1}, 73.08, 95.00}};
  for (const Row& row : rows) {
    const PrecisionRecall pr = precision_recall(row.t);
    CHECK(round2(pr.precision) == row.p);
    CHECK(round2(pr.recall) == row.r);
  }
  try {
    precision_recall({0, 0, 3});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUndefinedMetric);
  }
  CHECK_THROWS_AS(precision_recall({0, 2, 0}), Error);
}

TEST_CASE("shift gain from published shifts") {
  CHECK(round2(shift_gain(1.41, 0.49)) == 65.25);
  CHECK(round2(shift_gain(2.83, 1.32)) == 53.36);
  CHECK(round2(shift_gain(40.81, 1.75)) == 95.71);
  CHECK(shift_gain(3.0, 3.0) == 0.0);
  CHECK(shift_gain(1.0, 2.0) == -100.0);
  try {
    shift_gain(0.0, 1.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kZeroBefore);
  }
}

TEST_CASE("relative shift") {
  const std::vector<ControlPointPair> same{{Vec2(1, 2), Vec2(1, 2)}, {Vec2(5, 5), Vec2(5, 5)}};
  CHECK(relative_shift(same) == 0.0);
  const std::vector<ControlPointPair> one{{Vec2(0, 0), Vec2(3, 4)}};
  CHECK(relative_shift(one) == 5.0);
  const std::vector<ControlPointPair> two{{Vec2(0, 0), Vec2(3, 4)}, {Vec2(1, 1), Vec2(1, 2)}};
  CHECK(relative_shift(two) == 3.0);
  try {
    relative_shift(std::vector<ControlPointPair>{});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyList);
  }
}

TEST_CASE("pair tallies") {
  using P = std::pair<std::uint32_t, std::uint32_t>;
  const std::vector<P> truth{{1, 1}, {2, 2}, {3, 3}, {4, 4}};
  const std::vector<P> found{{1, 1}, {2, 3}, {4, 4}, {9, 9}};
  const Tally t = tally_pairs(found, truth);
  CHECK(t.tp == 2);
  CHECK(t.fa == 2);
  CHECK(t.m == 2);
}

TEST_CASE("back projection inverts projection on the plane") {
  CameraPose c;
  c.x0 = 100;
  c.y0 = 200;
  c.z0 = 1500;
  c.omega = 3.0;
  c.phi = 0.1;
  c.kappa = 0.7;
  c.focal = 3000;
  c.u0 = 500;
  c.v0 = 400;
  const ProjectionMatrix p = compose_projection(c);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-300, 300), z(0, 40);
  for (int i = 0; i < 100; ++i) {
    const Point3 X(u(rng), u(rng), z(rng));
    const Vec2 px = project_point(p, X);
    CHECK((back_project_to_plane(p, px, X.z()) - X.head<2>()).norm() < 1e-7);
  }
  const std::vector<ControlPoint> cps{{project_point(p, Point3(10, 20, 5)), Point3(10, 20, 5)}};
  const auto pairs = pairs_from_projection(cps, p);
  CHECK(relative_shift(pairs) < 1e-7);
}

TEST_CASE("georeference pairs and affine camera agree") {
  const GeoTransform g{1000.25, 2000.75, 0.5};
  const ProjectionMatrix a = georef_camera(g);
  const std::vector<ControlPoint> cps{{Vec2(10, 20), Point3(1000.25 + 5, 2000.75 - 10, 3)},
                                      {Vec2(3, 4), Point3(1000.25 + 1.5, 2000.75 - 2, 0)}};
  CHECK(relative_shift(pairs_from_georef(cps, g)) < 1e-9);
  CHECK((project_point(a, Point3(1005.25, 1990.75, 30)) - Vec2(10, 20)).norm() < 1e-9);
}

TEST_CASE("overlay basics") {
  ImageU8 img(30, 20, 3, GeoTransform{0, 19, 1}, 50);
  const ProjectionMatrix p = georef_camera(img.geo());
  CHECK(render_overlay(img, PointCloud{}, p) == img);

  PointCloud c;
  c.push_back(Point3(10, 9, 5), PointClass::kNonGround, 255);
  c.push_back(Point3(-100, 9, 5), PointClass::kNonGround, 255);  // outside
  const ImageU8 out = render_overlay(img, c, p, ColorBy::kIntensity);
  CHECK(out.width() == img.width());
  CHECK(out.geo() == img.geo());
  int changed = 0;
  for (int r = 0; r < 20; ++r)
    for (int col = 0; col < 30; ++col) changed += out.at(col, r, 0) != 50 || out.at(col, r, 2) != 50;
  CHECK(changed == 1);
  const auto hot = color_ramp(1.0);
  CHECK(out.at(10, 10, 0) == hot[0]);
  CHECK(out.at(10, 10, 2) == hot[2]);

  const ImageU8 gray(4, 4, 1, GeoTransform{}, 7);
  const ImageU8 rgb = render_overlay(gray, PointCloud{}, georef_camera(gray.geo()));
  CHECK(rgb.bands() == 3);
  CHECK(rgb.at(3, 3, 1) == 7);

  CHECK(color_ramp(0.0)[2] > color_ramp(0.0)[0]);
  CHECK(color_ramp(-5.0) == color_ramp(0.0));
}

TEST_CASE("projected roof points land on their own building") {
  synth::SceneSpec spec;
  spec.seed = 4;
  const synth::Scene scene = synth::generate_scene(spec);
  const ProjectionMatrix p = compose_projection(scene.true_pose);
  std::size_t roof = 0, hit = 0;
  for (std::size_t i = 0; i < scene.cloud.size(); ++i) {
    const Point3& X = scene.cloud.points[i];
    const std::uint32_t id = synth::building_at(scene, X.head<2>());
    if (id == 0 || X.z() < 1.0) continue;
    ++roof;
    hit += synth::building_seen_at(scene, project_point(p, X)) == id;
  }
  REQUIRE(roof > 1000);
  CHECK(hit >= 0.99 * roof);
}
