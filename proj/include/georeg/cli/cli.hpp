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

// Pipeline stages behind the `georeg` command. Each stage reads its inputs
// from the paths in the configuration and writes its artifacts into an
// output directory; `register` chains them through those files.

#include <filesystem>

#include "georeg/cli/config.hpp"
#include "georeg/io/artifacts.hpp"

namespace georeg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitBadConfig = 2;
inline constexpr int kExitDataError = 3;
inline constexpr int kExitDegenerate = 4;
inline constexpr int kExitNonConvergence = 5;

int exit_code(ErrorCode code) noexcept;

inline constexpr const char* kRegionsFile = "regions.json";
inline constexpr const char* kLidarMaskFile = "lidar_mask.pgm";
inline constexpr const char* kSegmentsFile = "segments.json";
inline constexpr const char* kImageMaskFile = "image_mask.pgm";
inline constexpr const char* kMatchesFile = "matches.json";
inline constexpr const char* kPoseFile = "pose.json";
inline constexpr const char* kMetricsFile = "metrics.json";
inline constexpr const char* kMetricsTableFile = "metrics.txt";
inline constexpr const char* kOverlayBeforeFile = "overlay_before.png";
inline constexpr const char* kOverlayAfterFile = "overlay_after.png";

io::RegionsArtifact run_extract_lidar(const PipelineConfig& cfg, const std::filesystem::path& out);
io::SegmentsArtifact run_segment_image(const PipelineConfig& cfg, const std::filesystem::path& out);
io::MatchesArtifact run_match(const PipelineConfig& cfg, const std::filesystem::path& out);
// Throws kNonConvergence after writing the best estimate.
io::PoseArtifact run_estimate_pose(const PipelineConfig& cfg, const std::filesystem::path& out);
io::MetricsArtifact run_register(const PipelineConfig& cfg, const std::filesystem::path& out);
// Writes cloud, image (+ world file from the perturbed pose), truth.json and
// control_points.json.
void run_synth(const PipelineConfig& cfg, const std::filesystem::path& out);

// Full command line entry point; returns the process exit status.
int run_cli(int argc, const char* const* argv);

}  // namespace georeg::cli
