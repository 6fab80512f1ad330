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

#include "georeg/synth/scene.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Geometry>
#include <spdlog/spdlog.h>

#include "georeg/core/geometry.hpp"

namespace georeg::synth {
namespace {

constexpr std::array<std::array<std::uint8_t, 3>, 4> kRoofColors{{
    {180, 80, 70}, {90, 90, 100}, {200, 200, 190}, {140, 110, 80}}};
constexpr std::array<std::uint8_t, 3> kGroundColor{110, 140, 90};
constexpr std::array<std::uint8_t, 3> kTreeColor{40, 90, 40};

constexpr std::uint8_t kRoofIntensity = 120;
constexpr std::uint8_t kGroundIntensity = 60;
constexpr std::uint8_t kTreeIntensity = 90;

double radius_of(const std::vector<Vec2>& poly, const Vec2& c) {
  double r = 0.0;
  for (const Vec2& p : poly) r = std::max(r, (p - c).norm());
  return r;
}

std::vector<Vec2> make_footprint(BuildingShape shape, double length, double width, double angle,
                                 const Vec2& at, std::mt19937_64& rng) {
  std::vector<Vec2> local;
  const double hl = 0.5 * length, hw = 0.5 * width;
  if (shape == BuildingShape::kRectangle) {
    local = {{-hl, -hw}, {hl, -hw}, {hl, hw}, {-hl, hw}};
  } else {
    // Remove the top-right corner, keeping both arms at least 8 m wide.
    std::uniform_real_distribution<double> cut(0.35, 0.6);
    const double cx = std::min(length * cut(rng), length - 8.0);
    const double cy = std::min(width * cut(rng), width - 8.0);
    local = {{-hl, -hw}, {hl, -hw}, {hl, hw - cy}, {hl - cx, hw - cy}, {hl - cx, hw}, {-hl, hw}};
  }
  const Eigen::Rotation2Dd rot(angle);
  std::vector<Vec2> out;
  for (const Vec2& p : local) out.push_back(at + rot * p);
  return out;
}

}  // namespace

void SceneSpec::validate() const {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::kConfig, std::string("invalid scene spec: ") + what);
  };
  need(extent > 0.0, "extent must be positive");
  need(n_buildings >= 0 && n_trees >= 0, "object counts must be >= 0");
  need(min_height > 0.0 && max_height >= min_height, "height range");
  need(min_size >= 8.0 && max_size >= min_size, "size range (min 8 m)");
  need(l_shape_fraction >= 0.0 && l_shape_fraction <= 1.0, "l_shape_fraction in [0, 1]");
  need(margin >= 0.0, "margin must be >= 0");
  need(min_tree_radius > 0.0 && max_tree_radius >= min_tree_radius, "tree radius range");
  need(min_tree_height > 0.0 && max_tree_height >= min_tree_height, "tree height range");
  need(density > 0.0, "density must be positive");
  need(resolution > 0.0, "resolution must be positive");
  need(altitude > max_height && altitude > max_tree_height, "altitude must exceed object heights");
  need(point_jitter >= 0.0 && color_noise >= 0.0, "noise levels must be >= 0");
}

bool Tree::contains(const Vec2& p) const {
  const Vec2 d = p - center;
  const double r = d.norm();
  if (r > radius || r < inner_radius) return false;
  double a = std::atan2(d.y(), d.x()) - gap_direction;
  a = std::remainder(a, 2.0 * M_PI);
  return std::abs(a) > M_PI / 4.0;
}

double polygon_area(const std::vector<Vec2>& polygon) { return std::abs(signed_area(polygon)); }

Vec2 polygon_centroid(const std::vector<Vec2>& polygon) {
  const std::size_t n = polygon.size();
  double a = 0.0;
  Vec2 c = Vec2::Zero();
  const Vec2 o = polygon[0];
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = polygon[i] - o, q = polygon[(i + 1) % n] - o;
    const double cr = p.x() * q.y() - q.x() * p.y();
    a += cr;
    c += (p + q) * cr;
  }
  return o + c / (3.0 * a);
}

Scene generate_scene(const SceneSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  Scene scene;
  scene.spec = spec;
  const Vec2 lo(spec.origin_x, spec.origin_y);
  const Vec2 hi = lo + Vec2(spec.extent, spec.extent);

  struct Disc {
    Vec2 c;
    double r;
  };
  std::vector<Disc> used;
  auto fits = [&](const Vec2& c, double r) {
    if ((c - lo).minCoeff() < r + spec.margin || (hi - c).minCoeff() < r + spec.margin) return false;
    for (const Disc& d : used) {
      if ((d.c - c).norm() < d.r + r + spec.margin) return false;
    }
    return true;
  };

  const int attempts = 2000;
  for (int i = 0; i < spec.n_buildings; ++i) {
    bool placed = false;
    for (int t = 0; t < attempts && !placed; ++t) {
      Building b;
      b.id = static_cast<std::uint32_t>(i + 1);
      b.shape = unit(rng) < spec.l_shape_fraction ? BuildingShape::kLShape : BuildingShape::kRectangle;
      const double length = uniform(spec.min_size, spec.max_size);
      const double width = uniform(spec.min_size, std::min(length, spec.max_size));
      const double angle = uniform(0.0, M_PI);
      const Vec2 at(uniform(lo.x(), hi.x()), uniform(lo.y(), hi.y()));
      if (b.shape == BuildingShape::kLShape && width < 20.0) b.shape = BuildingShape::kRectangle;
      b.footprint = make_footprint(b.shape, length, width, angle, at, rng);
      const double r = radius_of(b.footprint, at);
      if (!fits(at, r)) continue;
      used.push_back({at, r});
      b.height = uniform(spec.min_height, spec.max_height);
      b.area = polygon_area(b.footprint);
      b.center = polygon_centroid(b.footprint);
      b.color = kRoofColors[i % kRoofColors.size()];
      scene.buildings.push_back(std::move(b));
      placed = true;
    }
    if (!placed) throw Error(ErrorCode::kSpecInfeasible, "cannot place building " + std::to_string(i + 1));
  }
  for (int i = 0; i < spec.n_trees; ++i) {
    bool placed = false;
    for (int t = 0; t < attempts && !placed; ++t) {
      Tree tr;
      tr.radius = uniform(spec.min_tree_radius, spec.max_tree_radius);
      tr.inner_radius = 0.6 * tr.radius;
      tr.gap_direction = uniform(-M_PI, M_PI);
      tr.center = Vec2(uniform(lo.x(), hi.x()), uniform(lo.y(), hi.y()));
      if (!fits(tr.center, tr.radius)) continue;
      tr.height = uniform(spec.min_tree_height, spec.max_tree_height);
      used.push_back({tr.center, tr.radius});
      scene.trees.push_back(tr);
      placed = true;
    }
    if (!placed) throw Error(ErrorCode::kSpecInfeasible, "cannot place tree " + std::to_string(i + 1));
  }

  // Nadir camera above the scene center, north up.
  scene.width = scene.height = static_cast<int>(std::lround(spec.extent / spec.resolution));
  CameraPose& pose = scene.true_pose;
  const Vec2 mid = 0.5 * (lo + hi);
  pose.x0 = mid.x();
  pose.y0 = mid.y();
  pose.z0 = spec.altitude;
  pose.omega = M_PI;
  pose.focal = spec.altitude / spec.resolution;
  pose.u0 = 0.5 * (scene.width - 1);
  pose.v0 = 0.5 * (scene.height - 1);

  // LiDAR: one point per stratum, uniformly placed inside it.
  const double step = 1.0 / std::sqrt(spec.density);
  const int cells = static_cast<int>(std::floor(spec.extent / step));
  std::normal_distribution<double> jitter(0.0, 1.0);
  for (int r = 0; r < cells; ++r) {
    for (int c = 0; c < cells; ++c) {
      const Vec2 p = lo + Vec2((c + unit(rng)) * step, (r + unit(rng)) * step);
      const double dz = spec.point_jitter * jitter(rng);
      double z = 0.0;
      PointClass cls = PointClass::kGround;
      std::uint8_t intensity = kGroundIntensity;
      for (const Building& b : scene.buildings) {
        if (point_in_polygon(p, b.footprint)) {
          z = b.height;
          cls = PointClass::kNonGround;
          intensity = kRoofIntensity;
          break;
        }
      }
      if (cls == PointClass::kGround) {
        for (const Tree& t : scene.trees) {
          if (t.contains(p)) {
            z = t.height;
            cls = PointClass::kNonGround;
            intensity = kTreeIntensity;
            break;
          }
        }
      }
      scene.cloud.push_back(Point3(p.x(), p.y(), z + dz), cls, intensity);
    }
  }

  // Image: ray cast each pixel center against roof and crown planes, highest
  // first; walls are not modelled.
  struct Surface {
    double z;
    int building;  // index, or -1 - tree index
  };
  std::vector<Surface> surfaces;
  for (std::size_t i = 0; i < scene.buildings.size(); ++i) surfaces.push_back({scene.buildings[i].height, static_cast<int>(i)});
  for (std::size_t i = 0; i < scene.trees.size(); ++i) surfaces.push_back({scene.trees[i].height, -1 - static_cast<int>(i)});
  std::stable_sort(surfaces.begin(), surfaces.end(), [](const Surface& a, const Surface& b) { return a.z > b.z; });

  const ProjectionMatrix p = compose_projection(pose);
  scene.image = ImageU8(scene.width, scene.height, 3, georef_from_pose(pose, scene.width, scene.height));
  std::normal_distribution<double> noise(0.0, spec.color_noise);
  for (int v = 0; v < scene.height; ++v) {
    for (int u = 0; u < scene.width; ++u) {
      std::array<std::uint8_t, 3> color = kGroundColor;
      for (const Surface& s : surfaces) {
        const Vec2 w = eval::back_project_to_plane(p, Vec2(u, v), s.z);
        if (s.building >= 0) {
          if (point_in_polygon(w, scene.buildings[s.building].footprint)) {
            color = scene.buildings[s.building].color;
            break;
          }
        } else if (scene.trees[-1 - s.building].contains(w)) {
          color = kTreeColor;
          break;
        }
      }
      for (int b = 0; b < 3; ++b) {
        const double val = color[b] + (spec.color_noise > 0.0 ? noise(rng) : 0.0);
        scene.image.at(u, v, b) = static_cast<std::uint8_t>(std::clamp(std::lround(val), 0L, 255L));
      }
    }
  }
  spdlog::debug("synthetic scene: {} buildings, {} trees, {} points, {}x{} image",
                scene.buildings.size(), scene.trees.size(), scene.cloud.size(), scene.width, scene.height);
  return scene;
}

CameraPose perturb_pose(const CameraPose& pose, double translation, double rotation, std::uint64_t seed) {
  if (!std::isfinite(translation) || !std::isfinite(rotation)) {
    throw Error(ErrorCode::kInvalidArgument, "perturbation magnitudes must be finite");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double dir = 2.0 * M_PI * unit(rng);
  const double cz = 2.0 * unit(rng) - 1.0;
  const double az = 2.0 * M_PI * unit(rng);
  CameraPose out = pose;
  out.x0 += translation * std::cos(dir);
  out.y0 += translation * std::sin(dir);
  if (rotation != 0.0) {
    const double s = std::sqrt(std::max(0.0, 1.0 - cz * cz));
    const Eigen::Vector3d axis(s * std::cos(az), s * std::sin(az), cz);
    const Mat3 r = Eigen::AngleAxisd(rotation, axis).toRotationMatrix() *
                   rotation_from_opk(pose.omega, pose.phi, pose.kappa);
    const Opk a = opk_from_rotation(r);
    out.omega = a.omega;
    out.phi = a.phi;
    out.kappa = a.kappa;
  }
  return out;
}

GeoTransform georef_from_pose(const CameraPose& pose, int width, int height) {
  const ProjectionMatrix p = compose_projection(pose);
  const Vec2 a = eval::back_project_to_plane(p, Vec2(0, 0), 0.0);
  const Vec2 b = eval::back_project_to_plane(p, Vec2(width - 1, 0), 0.0);
  const Vec2 c = eval::back_project_to_plane(p, Vec2(0, height - 1), 0.0);
  const double res = 0.5 * ((b - a).norm() / (width - 1) + (c - a).norm() / (height - 1));
  // Center-anchored so a rotated prior keeps the image center in place.
  const Vec2 mid = eval::back_project_to_plane(p, Vec2(0.5 * (width - 1), 0.5 * (height - 1)), 0.0);
  GeoTransform g;
  g.resolution = res;
  g.origin_x = mid.x() - 0.5 * (width - 1) * res;
  g.origin_y = mid.y() + 0.5 * (height - 1) * res;
  return g;
}

std::vector<eval::ControlPoint> control_points(const Scene& scene) {
  const ProjectionMatrix p = compose_projection(scene.true_pose);
  std::vector<eval::ControlPoint> out;
  for (const Building& b : scene.buildings) {
    for (const Vec2& c : b.footprint) {
      const Point3 x(c.x(), c.y(), 0.0);
      const Vec2 px = project_point(p, x);
      if (px.x() < 0 || px.y() < 0 || px.x() > scene.width - 1 || px.y() > scene.height - 1) continue;
      out.push_back({px, x});
    }
  }
  return out;
}

std::uint32_t building_at(const Scene& scene, const Vec2& p) {
  for (const Building& b : scene.buildings) {
    if (point_in_polygon(p, b.footprint)) return b.id;
  }
  return 0;
}

std::uint32_t building_seen_at(const Scene& scene, const Vec2& pixel) {
  const ProjectionMatrix p = compose_projection(scene.true_pose);
  std::uint32_t best = 0;
  double best_h = -1.0;
  for (const Building& b : scene.buildings) {
    if (b.height <= best_h) continue;
    if (point_in_polygon(eval::back_project_to_plane(p, pixel, b.height), b.footprint)) {
      best = b.id;
      best_h = b.height;
    }
  }
  return best;
}

}  // namespace georeg::synth
