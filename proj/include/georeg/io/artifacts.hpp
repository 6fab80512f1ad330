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

// JSON stage artifacts exchanged between pipeline steps.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "georeg/core/camera.hpp"
#include "georeg/core/geometry.hpp"
#include "georeg/eval/metrics.hpp"
#include "georeg/image/segments.hpp"
#include "georeg/lidar/extract.hpp"
#include "georeg/pose/pose.hpp"

namespace georeg::io {

using Json = nlohmann::ordered_json;

struct RegionRecord {
  std::uint32_t id = 0;
  Vec2 center = Vec2::Zero();
  double mean_z = 0.0;
  double area = 0.0;
  std::size_t point_count = 0;
  OrientedRect mbr;
  std::vector<Vec2> boundary;
};

struct RegionsArtifact {
  double threshold = 0.0;
  double resolution = 0.0;
  std::size_t ground_count = 0;
  std::size_t non_ground_count = 0;
  std::string mask;  // file name next to the JSON
  std::vector<RegionRecord> regions;
};

struct SegmentsArtifact {
  GeoTransform geo;
  int width = 0;
  int height = 0;
  std::uint32_t raw_count = 0;
  std::uint32_t sized_count = 0;
  std::string mask;
  std::vector<image::Segment2D> segments;
};

struct PairRecord {
  std::uint32_t lidar_id = 0;
  std::uint32_t image_id = 0;
  Point3 lidar_center = Point3::Zero();  // z = mean region elevation
  Vec2 image_center = Vec2::Zero();      // world, from the image georeference
  Vec2 image_pixel = Vec2::Zero();       // segment centroid
  bool inlier = true;
};

struct MatchesArtifact {
  std::string method;
  Vec2 translation = Vec2::Zero();
  std::size_t initial_pairs = 0;
  std::size_t filtered_pairs = 0;
  std::size_t validated_pairs = 0;
  Json parameters = Json::object();
  std::vector<PairRecord> pairs;
};

struct PoseArtifact {
  pose::PoseEstimate estimate;
  std::size_t correspondences = 0;
};

struct MetricsArtifact {
  std::size_t lidar_regions = 0;
  std::size_t image_segments = 0;
  std::size_t initial_pairs = 0;
  std::size_t filtered_pairs = 0;
  std::size_t validated_pairs = 0;
  std::size_t control_points = 0;
  double shift_before = 0.0;
  double shift_after = 0.0;
  double gain = 0.0;
  double rms = 0.0;
};

Json to_json(const GeoTransform& g);
GeoTransform geo_from_json(const Json& j);
Json to_json(const OrientedRect& r);
OrientedRect rect_from_json(const Json& j);
Json to_json(const CameraPose& p);
CameraPose pose_from_json(const Json& j);

Json to_json(const RegionsArtifact& a);
RegionsArtifact regions_from_json(const Json& j);
RegionsArtifact make_regions_artifact(const lidar::ExtractionResult& r, const std::string& mask_name);

Json to_json(const SegmentsArtifact& a);
SegmentsArtifact segments_from_json(const Json& j);

Json to_json(const MatchesArtifact& a);
MatchesArtifact matches_from_json(const Json& j);

Json to_json(const PoseArtifact& a);
PoseArtifact pose_artifact_from_json(const Json& j);

Json to_json(const MetricsArtifact& a);
// Aligned two-column text rendering of the metrics.
std::string metrics_table(const MetricsArtifact& a);

Json to_json(const std::vector<eval::ControlPoint>& cps);
std::vector<eval::ControlPoint> control_points_from_json(const Json& j);

// Pretty-printed with a trailing newline. Throws kIo.
void write_json(const std::filesystem::path& path, const Json& j);
// Throws kIo when unreadable, kParse on malformed content.
Json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace georeg::io
