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

#include "georeg/io/artifacts.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace georeg::io {
namespace {

Json vec(const Vec2& v) { return Json::array({v.x(), v.y()}); }
Json vec(const Point3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Vec2 vec2(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::kParse, "expected a 2-vector");
  return {j[0].get<double>(), j[1].get<double>()};
}

Point3 vec3(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::kParse, "expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

// Wraps nlohmann exceptions (missing keys, wrong types) as parse errors.
template <class F>
auto parsing(const char* what, F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string(what) + ": " + e.what());
  }
}

void expect_kind(const Json& j, const char* kind) {
  if (!j.is_object() || !j.contains("kind") || j["kind"] != kind) {
    throw Error(ErrorCode::kParse, std::string("expected a '") + kind + "' document");
  }
}

}  // namespace

Json to_json(const GeoTransform& g) {
  return {{"origin_x", g.origin_x}, {"origin_y", g.origin_y}, {"resolution", g.resolution}};
}

GeoTransform geo_from_json(const Json& j) {
  return parsing("georeference", [&] {
    return GeoTransform{j.at("origin_x").get<double>(), j.at("origin_y").get<double>(),
                        j.at("resolution").get<double>()};
  });
}

Json to_json(const OrientedRect& r) {
  Json corners = Json::array();
  for (const Vec2& c : r.corners) corners.push_back(vec(c));
  return {{"corners", corners}, {"angle", r.angle}, {"length", r.length}, {"width", r.width}, {"area", r.area}};
}

OrientedRect rect_from_json(const Json& j) {
  return parsing("rectangle", [&] {
    OrientedRect r;
    const Json& c = j.at("corners");
    if (c.size() != 4) throw Error(ErrorCode::kParse, "rectangle needs four corners");
    for (int i = 0; i < 4; ++i) r.corners[i] = vec2(c[i]);
    r.angle = j.at("angle").get<double>();
    r.length = j.at("length").get<double>();
    r.width = j.at("width").get<double>();
    r.area = j.at("area").get<double>();
    return r;
  });
}

Json to_json(const CameraPose& p) {
  return {{"x0", p.x0}, {"y0", p.y0}, {"z0", p.z0}, {"omega", p.omega}, {"phi", p.phi},
          {"kappa", p.kappa}, {"focal", p.focal}, {"u0", p.u0}, {"v0", p.v0}};
}

CameraPose pose_from_json(const Json& j) {
  return parsing("camera pose", [&] {
    CameraPose p;
    p.x0 = j.at("x0").get<double>();
    p.y0 = j.at("y0").get<double>();
    p.z0 = j.at("z0").get<double>();
    p.omega = j.at("omega").get<double>();
    p.phi = j.at("phi").get<double>();
    p.kappa = j.at("kappa").get<double>();
    p.focal = j.at("focal").get<double>();
    p.u0 = j.at("u0").get<double>();
    p.v0 = j.at("v0").get<double>();
    return p;
  });
}

RegionsArtifact make_regions_artifact(const lidar::ExtractionResult& r, const std::string& mask_name) {
  RegionsArtifact a;
  a.threshold = r.threshold;
  a.resolution = r.resolution;
  a.ground_count = r.ground_count;
  a.non_ground_count = r.non_ground_count;
  a.mask = mask_name;
  for (const auto& reg : r.regions) {
    a.regions.push_back({reg.label, reg.center, reg.mean_z, reg.area, reg.points.size(), reg.mbr, reg.boundary});
  }
  return a;
}

Json to_json(const RegionsArtifact& a) {
  Json regions = Json::array();
  for (const auto& r : a.regions) {
    Json boundary = Json::array();
    for (const Vec2& b : r.boundary) boundary.push_back(vec(b));
    regions.push_back({{"id", r.id}, {"center", vec(r.center)}, {"mean_z", r.mean_z}, {"area", r.area},
                       {"point_count", r.point_count}, {"mbr", to_json(r.mbr)}, {"boundary", boundary}});
  }
  return {{"kind", "lidar_regions"}, {"threshold", a.threshold}, {"resolution", a.resolution},
          {"ground_count", a.ground_count}, {"non_ground_count", a.non_ground_count},
          {"mask", a.mask}, {"regions", regions}};
}

RegionsArtifact regions_from_json(const Json& j) {
  expect_kind(j, "lidar_regions");
  return parsing("regions", [&] {
    RegionsArtifact a;
    a.threshold = j.at("threshold").get<double>();
    a.resolution = j.at("resolution").get<double>();
    a.ground_count = j.at("ground_count").get<std::size_t>();
    a.non_ground_count = j.at("non_ground_count").get<std::size_t>();
    a.mask = j.at("mask").get<std::string>();
    for (const Json& r : j.at("regions")) {
      RegionRecord rec;
      rec.id = r.at("id").get<std::uint32_t>();
      rec.center = vec2(r.at("center"));
      rec.mean_z = r.at("mean_z").get<double>();
      rec.area = r.at("area").get<double>();
      rec.point_count = r.at("point_count").get<std::size_t>();
      rec.mbr = rect_from_json(r.at("mbr"));
      for (const Json& b : r.at("boundary")) rec.boundary.push_back(vec2(b));
      a.regions.push_back(std::move(rec));
    }
    return a;
  });
}

Json to_json(const SegmentsArtifact& a) {
  Json segments = Json::array();
  for (const auto& s : a.segments) {
    segments.push_back({{"id", s.label}, {"pixel_count", s.pixel_count}, {"centroid_px", vec(s.centroid_px)},
                        {"center", vec(s.center)}, {"area", s.area}, {"filling", s.filling},
                        {"mbr_px", to_json(s.mbr_px)}, {"mbr", to_json(s.mbr)}});
  }
  return {{"kind", "image_segments"}, {"georeference", to_json(a.geo)}, {"width", a.width},
          {"height", a.height}, {"raw_count", a.raw_count}, {"sized_count", a.sized_count},
          {"mask", a.mask}, {"segments", segments}};
}

SegmentsArtifact segments_from_json(const Json& j) {
  expect_kind(j, "image_segments");
  return parsing("segments", [&] {
    SegmentsArtifact a;
    a.geo = geo_from_json(j.at("georeference"));
    a.width = j.at("width").get<int>();
    a.height = j.at("height").get<int>();
    a.raw_count = j.at("raw_count").get<std::uint32_t>();
    a.sized_count = j.at("sized_count").get<std::uint32_t>();
    a.mask = j.at("mask").get<std::string>();
    for (const Json& s : j.at("segments")) {
      image::Segment2D seg;
      seg.label = s.at("id").get<std::uint32_t>();
      seg.pixel_count = s.at("pixel_count").get<std::size_t>();
      seg.centroid_px = vec2(s.at("centroid_px"));
      seg.center = vec2(s.at("center"));
      seg.area = s.at("area").get<double>();
      seg.filling = s.at("filling").get<double>();
      seg.mbr_px = rect_from_json(s.at("mbr_px"));
      seg.mbr = rect_from_json(s.at("mbr"));
      a.segments.push_back(seg);
    }
    return a;
  });
}

Json to_json(const MatchesArtifact& a) {
  Json pairs = Json::array();
  for (const auto& p : a.pairs) {
    pairs.push_back({{"lidar_id", p.lidar_id}, {"image_id", p.image_id}, {"lidar_center", vec(p.lidar_center)},
                     {"image_center", vec(p.image_center)}, {"image_pixel", vec(p.image_pixel)},
                     {"inlier", p.inlier}});
  }
  return {{"kind", "matches"}, {"method", a.method}, {"translation", vec(a.translation)},
          {"initial_pairs", a.initial_pairs}, {"filtered_pairs", a.filtered_pairs},
          {"validated_pairs", a.validated_pairs}, {"parameters", a.parameters}, {"pairs", pairs}};
}

MatchesArtifact matches_from_json(const Json& j) {
  expect_kind(j, "matches");
  return parsing("matches", [&] {
    MatchesArtifact a;
    a.method = j.at("method").get<std::string>();
    a.translation = vec2(j.at("translation"));
    a.initial_pairs = j.at("initial_pairs").get<std::size_t>();
    a.filtered_pairs = j.at("filtered_pairs").get<std::size_t>();
    a.validated_pairs = j.at("validated_pairs").get<std::size_t>();
    a.parameters = j.at("parameters");
    for (const Json& p : j.at("pairs")) {
      PairRecord r;
      r.lidar_id = p.at("lidar_id").get<std::uint32_t>();
      r.image_id = p.at("image_id").get<std::uint32_t>();
      r.lidar_center = vec3(p.at("lidar_center"));
      r.image_center = vec2(p.at("image_center"));
      r.image_pixel = vec2(p.at("image_pixel"));
      r.inlier = p.at("inlier").get<bool>();
      a.pairs.push_back(r);
    }
    return a;
  });
}

Json to_json(const PoseArtifact& a) {
  const auto& e = a.estimate;
  Json p = Json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) p.push_back(e.p.matrix()(r, c));
  }
  Json k = Json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) k.push_back(e.k(r, c));
  }
  return {{"kind", "pose"}, {"P", p}, {"pose", to_json(e.pose)}, {"K", k}, {"rms", e.rms},
          {"initial_rms", e.initial_rms}, {"residuals", e.residuals}, {"iterations", e.iterations},
          {"converged", e.converged}, {"correspondences", a.correspondences}};
}

PoseArtifact pose_artifact_from_json(const Json& j) {
  expect_kind(j, "pose");
  return parsing("pose", [&] {
    PoseArtifact a;
    auto& e = a.estimate;
    const Json& p = j.at("P");
    if (p.size() != 12) throw Error(ErrorCode::kParse, "P needs 12 entries");
    Mat34 m;
    for (int i = 0; i < 12; ++i) m(i / 4, i % 4) = p[i].get<double>();
    e.p = ProjectionMatrix(m);
    e.pose = pose_from_json(j.at("pose"));
    const Json& k = j.at("K");
    if (k.size() != 9) throw Error(ErrorCode::kParse, "K needs 9 entries");
    for (int i = 0; i < 9; ++i) e.k(i / 3, i % 3) = k[i].get<double>();
    e.rms = j.at("rms").get<double>();
    e.initial_rms = j.at("initial_rms").get<double>();
    e.residuals = j.at("residuals").get<std::vector<double>>();
    e.iterations = j.at("iterations").get<int>();
    e.converged = j.at("converged").get<bool>();
    a.correspondences = j.at("correspondences").get<std::size_t>();
    return a;
  });
}

Json to_json(const MetricsArtifact& a) {
  Json j = {{"kind", "metrics"},
            {"lidar_regions", a.lidar_regions},
            {"image_segments", a.image_segments},
            {"initial_pairs", a.initial_pairs},
            {"filtered_pairs", a.filtered_pairs},
            {"validated_pairs", a.validated_pairs},
            {"rms_px", a.rms},
            {"control_points", a.control_points}};
  if (a.control_points > 0) {
    j["shift_before_m"] = a.shift_before;
    j["shift_after_m"] = a.shift_after;
    j["gain_percent"] = a.gain;
  }
  return j;
}

std::string metrics_table(const MetricsArtifact& a) {
  std::ostringstream os;
  os << std::fixed;
  auto row = [&](const char* name, auto value, int precision) {
    os << std::left << std::setw(24) << name << std::right << std::setw(12) << std::setprecision(precision)
       << value << '\n';
  };
  row("lidar regions", a.lidar_regions, 0);
  row("image segments", a.image_segments, 0);
  row("initial pairs", a.initial_pairs, 0);
  row("filtered pairs", a.filtered_pairs, 0);
  row("validated pairs", a.validated_pairs, 0);
  row("reprojection rms (px)", a.rms, 3);
  if (a.control_points > 0) {
    row("control points", a.control_points, 0);
    row("shift before (m)", a.shift_before, 2);
    row("shift after (m)", a.shift_after, 2);
    row("gain (%)", a.gain, 2);
  }
  return os.str();
}

Json to_json(const std::vector<eval::ControlPoint>& cps) {
  Json arr = Json::array();
  for (const auto& c : cps) arr.push_back({{"pixel", vec(c.pixel)}, {"world", vec(c.world)}});
  return {{"kind", "control_points"}, {"control_points", arr}};
}

std::vector<eval::ControlPoint> control_points_from_json(const Json& j) {
  return parsing("control points", [&] {
    std::vector<eval::ControlPoint> out;
    for (const Json& c : j.at("control_points")) out.push_back({vec2(c.at("pixel")), vec3(c.at("world"))});
    return out;
  });
}

void write_json(const std::filesystem::path& path, const Json& j) {
  write_text(path, j.dump(2) + "\n");
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

}  // namespace georeg::io
