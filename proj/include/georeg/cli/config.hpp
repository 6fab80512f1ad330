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

// Flat "key = value" pipeline configuration. Unknown keys and out-of-range
// values are rejected with kConfig.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "georeg/eval/metrics.hpp"
#include "georeg/image/segments.hpp"
#include "georeg/io/artifacts.hpp"
#include "georeg/lidar/extract.hpp"
#include "georeg/matching/matching.hpp"
#include "georeg/pose/pose.hpp"
#include "georeg/synth/scene.hpp"

namespace georeg::cli {

enum class MatchMethod { kGtm, kRansac, kNone };

struct PipelineConfig {
  std::uint64_t seed = 1;

  lidar::ExtractionOptions lidar;
  image::SegmentationOptions image;

  MatchMethod method = MatchMethod::kGtm;
  int k = match::kDefaultK;
  match::InitialMatchOptions initial;
  match::RansacOptions ransac;
  bool validate = true;
  match::ValidationOptions validation;

  pose::GoldStandardOptions pose;

  eval::ColorBy color_by = eval::ColorBy::kElevation;
  bool overlay_all_points = false;

  synth::SceneSpec synth;
  double synth_shift = 40.0;     // meters
  double synth_rotation = 0.0;   // radians
  std::string synth_cloud_format = "ply";

  std::filesystem::path cloud;
  std::filesystem::path image_path;
  std::filesystem::path pan;
  std::filesystem::path regions;
  std::filesystem::path segments;
  std::filesystem::path matches;
  std::filesystem::path control_points;

  PipelineConfig();
};

void apply_setting(PipelineConfig& cfg, std::string_view key, std::string_view value);

// Applies every "key = value" line; '#' starts a comment.
void apply_config_text(PipelineConfig& cfg, std::string_view text, std::string_view source = "config");
void apply_config_file(PipelineConfig& cfg, const std::filesystem::path& path);

// Names of every accepted key, in documentation order.
std::vector<std::string> config_keys();

// Current value of every key as text.
io::Json config_to_json(const PipelineConfig& cfg);

}  // namespace georeg::cli
