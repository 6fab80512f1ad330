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
#include <set>

#include "georeg/lidar/extract.hpp"
#include "oracles.hpp"

using namespace georeg;
using namespace georeg::lidar;

namespace {

BinaryMask mask_from(const std::vector<std::string>& rows) {
  BinaryMask m(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()), 1);
  for (int r = 0; r < m.height(); ++r) {
    for (int c = 0; c < m.width(); ++c) m.at(c, r) = rows[r][c] == '#' ? 1 : 0;
  }
  return m;
}

std::size_t ones(const BinaryMask& m) {
  std::size_t n = 0;
  for (auto v : m.data()) n += v;
  return n;
}

// Flat ground at z=0 and a box roof at z=h over [x0,x1)x[y0,y1), sampled on
// a regular lattice of spacing `step`.
PointCloud box_scene(double extent, double step, double x0, double x1, double y0, double y1,
                     double h) {
  PointCloud c;
  for (double y = step / 2; y < extent; y += step) {
    for (double x = step / 2; x < extent; x += step) {
      const bool roof = x >= x0 && x < x1 && y >= y0 && y < y1;
      c.push_back({x, y, roof ? h : 0.0}, roof ? PointClass::kNonGround : PointClass::kGround);
    }
  }
  return c;
}

}  // namespace

TEST_CASE("threshold examples") {
  const std::vector<double> flat{10, 10, 10};
  CHECK(threshold_from_ground(flat) == doctest::Approx(12.5).epsilon(1e-15));
  const std::vector<double> spread{96, 100, 104, 100};
  CHECK(threshold_from_ground(spread) == doctest::Approx(100.0 + std::sqrt(8.0)).epsilon(1e-15));
  CHECK_THROWS_AS(threshold_from_ground({}), Error);
}

TEST_CASE("threshold agrees with long-double re-evaluation") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> n(1, 500);
  std::uniform_real_distribution<double> base(-50, 3000), spread(0.01, 20);
  for (int t = 0; t < 1000; ++t) {
    std::normal_distribution<double> z(base(rng), spread(rng));
    std::vector<double> g(n(rng));
    for (double& v : g) v = z(rng);
    const double got = threshold_from_ground(g);
    const double want = oracle::threshold(g);
    REQUIRE(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("elevation split partitions the cloud") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 30);
  PointCloud c;
  for (int i = 0; i < 2000; ++i) {
    const double z = u(rng);
    c.push_back({u(rng), u(rng), z}, z < 3 ? PointClass::kGround : PointClass::kNonGround);
  }
  const ElevationSplit s = elevation_threshold(c);
  CHECK(s.ground.size() + s.non_ground.size() == c.size());
  for (const Point3& p : s.non_ground.points) CHECK(p.z() > s.threshold);
  for (const Point3& p : s.ground.points) CHECK(p.z() <= s.threshold);
}

TEST_CASE("all ground below threshold gives empty non-ground") {
  PointCloud c;
  for (int i = 0; i < 10; ++i) c.push_back({double(i), 0, 1.0}, PointClass::kGround);
  const ElevationSplit s = elevation_threshold(c);
  CHECK(s.non_ground.empty());
  CHECK(s.ground.size() == 10);
}

TEST_CASE("no ground points") {
  PointCloud c;
  for (int i = 0; i < 20; ++i) c.push_back({double(i), 0, double(i)}, PointClass::kNonGround);
  try {
    elevation_threshold(c);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNoGroundPoints);
  }
  ElevationOptions fb;
  fb.lowest_decile_fallback = true;
  // lowest two of 0..19: mean 0.5, std 0.5 -> 3.0
  CHECK(elevation_threshold(c, fb).threshold == doctest::Approx(3.0));
  CHECK_THROWS_AS(elevation_threshold(PointCloud{}), Error);
}

TEST_CASE("default resolution") {
  CHECK(default_resolution(2.0) == 1.0);
  CHECK(default_resolution(8.0) == 0.5);
}

TEST_CASE("vertical projection examples") {
  PointCloud one;
  one.push_back({10.5, 20.5, 5}, PointClass::kNonGround);
  CHECK(ones(vertical_project(one, 1.0)) == 1);
  one.push_back({10.7, 20.2, 6}, PointClass::kNonGround);
  CHECK(ones(vertical_project(one, 1.0)) == 1);
  CHECK_THROWS_AS(vertical_project(PointCloud{}, 1.0), Error);
}

TEST_CASE("vertical projection of a jittered 2 pts/m^2 grid fills every cell") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> jit(-0.2, 0.2);
  PointCloud c;
  for (int j = 0; j < 20; ++j) {
    for (int i = 0; i < 30; ++i) {
      c.push_back({i + 0.25 + jit(rng), j + 0.5 + jit(rng), 0}, PointClass::kNonGround);
      c.push_back({i + 0.75 + jit(rng), j + 0.5 + jit(rng), 0}, PointClass::kNonGround);
    }
  }
  const BinaryMask m = vertical_project(c, 1.0);
  CHECK(ones(m) == 600);
  for (const Point3& p : c.points) {
    const PixelIndex px = m.geo().cell(p.x(), p.y());
    REQUIRE(m.contains(px.col, px.row));
    CHECK(m.at(px.col, px.row) == 1);
  }
}

TEST_CASE("vertical projection marks exactly the occupied cells") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-7.3, 41.9);
  PointCloud c;
  for (int i = 0; i < 300; ++i) c.push_back({u(rng), u(rng), 0}, PointClass::kNonGround);
  const BinaryMask m = vertical_project(c, 1.5);
  std::set<std::pair<int, int>> occupied;
  for (const Point3& p : c.points) {
    const Vec2 px = m.geo().pixel(p.x(), p.y());
    occupied.insert({int(std::floor(px.x() + 0.5)), int(std::floor(px.y() + 0.5))});
  }
  CHECK(ones(m) == occupied.size());
  for (auto [col, row] : occupied) CHECK(m.at(col, row) == 1);
}

TEST_CASE("opening examples") {
  // A 3x3 block disappears under a 5-diamond; a 7x7 block keeps its inner diamond-closed shape.
  BinaryMask small(15, 15, 1);
  for (int r = 5; r < 8; ++r)
    for (int c = 5; c < 8; ++c) small.at(c, r) = 1;
  CHECK(ones(morphological_open(small, 5)) == 0);

  BinaryMask big(20, 20, 1);
  for (int r = 5; r < 15; ++r)
    for (int c = 5; c < 15; ++c) big.at(c, r) = 1;
  const BinaryMask opened = morphological_open(big, 5);
  // Square corners lose the pixels outside the diamond sum: 3 per corner.
  CHECK(ones(opened) == 100 - 4 * 3);
  CHECK(opened.at(9, 9) == 1);
  CHECK(opened.at(5, 5) == 0);

  // A diamond cannot reach into a square's corner, so even a large square
  // loses its corner pixels.
  BinaryMask sq(30, 30, 1);
  for (int r = 5; r < 25; ++r)
    for (int c = 5; c < 25; ++c) sq.at(c, r) = 1;
  const BinaryMask osq = morphological_open(sq, 5);
  CHECK(ones(osq) == 400 - 12);
  CHECK(osq == oracle::open(sq, 5));
  BinaryMask dot(9, 9, 1);
  dot.at(4, 4) = 1;
  CHECK(ones(morphological_open(dot, 5)) == 0);

  CHECK_THROWS_AS(morphological_open(big, 4), Error);
  CHECK_THROWS_AS(morphological_open(big, 1), Error);
}

TEST_CASE("opening matches brute force on random masks") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 200; ++t) {
    const BinaryMask m = t % 2 ? oracle::blobby_mask(rng, 64, 64, 0.5) : oracle::random_mask(rng, 64, 64, 0.7);
    for (int se : {5, 7}) {
      const BinaryMask got = morphological_open(m, se);
      REQUIRE(got.data().size() == m.data().size());
      const BinaryMask want = oracle::open(m, se);
      REQUIRE(std::equal(got.data().begin(), got.data().end(), want.data().begin()));
    }
  }
}

TEST_CASE("opening is anti-extensive, idempotent and monotone") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 40; ++t) {
    const BinaryMask a = oracle::blobby_mask(rng, 48, 40, 0.5);
    BinaryMask b = a;
    const BinaryMask extra = oracle::random_mask(rng, 48, 40, 0.2);
    for (std::size_t i = 0; i < b.data().size(); ++i) b.data()[i] |= extra.data()[i];
    const BinaryMask oa = morphological_open(a, 5);
    const BinaryMask ob = morphological_open(b, 5);
    CHECK(morphological_open(oa, 5) == oa);
    for (std::size_t i = 0; i < a.data().size(); ++i) {
      REQUIRE(oa.data()[i] <= a.data()[i]);
      REQUIRE(oa.data()[i] <= ob.data()[i]);
    }
  }
}

TEST_CASE("labeling examples") {
  const BinaryMask m = mask_from({
      "##..#",
      "#...#",
      "..#..",
      ".....",
      "#...#",
  });
  const LabeledMask l = label_connected(m);
  // Diagonal contact joins (1,1)-(2,2)? (1,1) is empty; (0,1)-(2,2) not adjacent.
  CHECK(l.count == 5);
  CHECK(l.raster.at(0, 0) == 1);
  CHECK(l.raster.at(0, 1) == 1);
  CHECK(l.raster.at(4, 0) == 2);
  CHECK(l.raster.at(2, 2) == 3);
  CHECK(l.raster.at(0, 4) == 4);
  CHECK(l.raster.at(4, 4) == 5);

  const LabeledMask diag = label_connected(mask_from({"#..", ".#.", "..#"}));
  CHECK(diag.count == 1);
}

TEST_CASE("labeling matches union-find on random masks") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 200; ++t) {
    const BinaryMask m = oracle::random_mask(rng, 64, 64, 0.1 + 0.4 * (t % 5) / 4.0);
    const LabeledMask got = label_connected(m);
    const auto want = oracle::label(m);
    REQUIRE(std::equal(got.raster.data().begin(), got.raster.data().end(), want.begin()));
    REQUIRE(got.count == *std::max_element(want.begin(), want.end()));
  }
}

TEST_CASE("small region removal") {
  auto square = [](int n, double res) {
    BinaryMask m(n + 2, n + 2, 1, GeoTransform{0, 0, res});
    for (int r = 1; r <= n; ++r)
      for (int c = 1; c <= n; ++c) m.at(c, r) = 1;
    return label_connected(m);
  };
  CHECK(remove_small_regions(square(4, 1.0)).count == 0);  // 16 m^2
  CHECK(remove_small_regions(square(5, 1.0)).count == 1);  // 25 m^2
  CHECK(remove_small_regions(square(3, 2.0)).count == 1);  // 36 m^2

  BinaryMask m(12, 4, 1);
  for (int c = 0; c < 2; ++c) m.at(c, 0) = 1;
  for (int r = 0; r < 4; ++r)
    for (int c = 4; c < 10; ++c) m.at(c, r) = 1;
  const LabeledMask kept = remove_small_regions(label_connected(m));
  CHECK(kept.count == 1);
  CHECK(kept.raster.at(0, 0) == 0);
  CHECK(kept.raster.at(4, 0) == 1);
}

TEST_CASE("boundary tracing") {
  const LabeledMask l = label_connected(mask_from({
      "....",
      ".##.",
      ".##.",
      "....",
  }));
  const auto ring = trace_boundary(l, 1);
  REQUIRE(ring.size() == 5);
  CHECK(ring.front() == PixelIndex{1, 1});
  CHECK(ring[1] == PixelIndex{2, 1});
  CHECK(ring[2] == PixelIndex{2, 2});
  CHECK(ring[3] == PixelIndex{1, 2});
  CHECK(ring.back() == ring.front());

  const auto single = trace_boundary(label_connected(mask_from({"...", ".#.", "..."})), 1);
  CHECK(single.size() == 2);
  CHECK(trace_boundary(l, 7).empty());

  // Every boundary pixel is in the label and touches background or the edge.
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const LabeledMask b = label_connected(oracle::blobby_mask(rng, 30, 30, 0.5));
    for (std::uint32_t id = 1; id <= b.count; ++id) {
      for (const PixelIndex& p : trace_boundary(b, id)) {
        REQUIRE(b.raster.at(p.col, p.row) == id);
        bool edge = false;
        for (int dr = -1; dr <= 1; ++dr)
          for (int dc = -1; dc <= 1; ++dc)
            edge |= !b.raster.contains(p.col + dc, p.row + dr) ||
                    b.raster.at(p.col + dc, p.row + dr) != id;
        REQUIRE(edge);
      }
    }
  }
}

TEST_CASE("building points follow their cell labels") {
  const PointCloud c = box_scene(60, 0.5, 10, 30, 20, 35, 12);
  CHECK(extract_buildings(c).resolution == 0.75);  // 4 pts/m^2 by default
  ExtractionOptions opt;
  opt.resolution = 0.5;
  const ExtractionResult r = extract_buildings(c, opt);
  REQUIRE(r.regions.size() == 1);
  const Region3D& b = r.regions[0];
  CHECK(r.threshold == doctest::Approx(2.5));
  // Oracle: every non-ground point whose cell carries a label belongs to it.
  std::size_t expected = 0;
  for (const Point3& p : c.points) {
    if (p.z() <= r.threshold) continue;
    const PixelIndex px = r.mask.raster.geo().cell(p.x(), p.y());
    if (r.mask.raster.contains(px.col, px.row) && r.mask.raster.at(px.col, px.row) == b.label) ++expected;
  }
  CHECK(b.points.size() == expected);
  CHECK(b.center.x() == doctest::Approx(20.0).epsilon(1e-3));
  CHECK(b.center.y() == doctest::Approx(27.5).epsilon(1e-3));
  CHECK(b.mean_z == doctest::Approx(12.0));
  // 20 x 15 footprint less the corner shaving of the opening.
  CHECK(b.area == doctest::Approx(300.0 - 12 * 0.25));
  CHECK(b.mbr.area == doctest::Approx(300.0).epsilon(0.01));
  CHECK(b.boundary.front() == b.boundary.back());
}

TEST_CASE("extraction on flat terrain yields no regions") {
  const PointCloud c = box_scene(30, 0.5, 0, 0, 0, 0, 0);
  const ExtractionResult r = extract_buildings(c);
  CHECK(r.regions.empty());
  CHECK(r.mask.count == 0);
}

TEST_CASE("extraction is deterministic") {
  const PointCloud c = box_scene(80, 0.5, 10, 30, 20, 35, 12);
  const ExtractionResult a = extract_buildings(c), b = extract_buildings(c);
  CHECK(a.mask == b.mask);
  REQUIRE(a.regions.size() == b.regions.size());
  CHECK(a.regions[0].center == b.regions[0].center);
}
