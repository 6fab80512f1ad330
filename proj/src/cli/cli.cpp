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

#include "georeg/cli/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "georeg/image/pansharpen.hpp"
#include "georeg/io/cloud_io.hpp"
#include "georeg/io/raster_io.hpp"

namespace georeg::cli {
namespace fs = std::filesystem;

int exit_code(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kConfig:
    case ErrorCode::kSpecInfeasible:
      return kExitBadConfig;
    case ErrorCode::kPointAtInfinity:
    case ErrorCode::kTooFewPoints:
    case ErrorCode::kDegenerateInput:
    case ErrorCode::kNoMutualPairs:
    case ErrorCode::kNoConsensus:
    case ErrorCode::kDegenerateConfiguration:
      return kExitDegenerate;
    case ErrorCode::kNonConvergence:
      return kExitNonConvergence;
    default:
      return kExitDataError;
  }
}

namespace {

const fs::path& require(const fs::path& p, const char* what) {
  if (p.empty()) throw Error(ErrorCode::kConfig, std::string("missing input: ") + what);
  return p;
}

void prepare(const fs::path& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + out.string() + ": " + ec.message());
}

match::CenterSet lidar_centers(const io::RegionsArtifact& r) {
  match::CenterSet s;
  for (const auto& reg : r.regions) {
    s.push_back(reg.id, reg.center, reg.area, reg.mbr.angle,
                reg.mbr.width > 0.0 ? reg.mbr.length / reg.mbr.width : 1.0);
  }
  return s;
}

match::CenterSet image_centers(const io::SegmentsArtifact& a) {
  match::CenterSet s;
  for (const auto& seg : a.segments) {
    s.push_back(seg.label, seg.center, seg.area, seg.mbr.angle,
                seg.mbr.width > 0.0 ? seg.mbr.length / seg.mbr.width : 1.0);
  }
  return s;
}

ImageU8 load_image(const PipelineConfig& cfg) {
  ImageU8 img = io::read_image(require(cfg.image_path, "image"));
  if (!cfg.pan.empty()) {
    const ImageU8 pan = io::read_image(cfg.pan);
    img = image::to_u8(image::pansharpen(pan, img));
  }
  return img;
}

const char* method_name(MatchMethod m) {
  switch (m) {
    case MatchMethod::kGtm: return "gtm";
    case MatchMethod::kRansac: return "ransac";
    case MatchMethod::kNone: return "none";
  }
  return "?";
}

}  // namespace

io::RegionsArtifact run_extract_lidar(const PipelineConfig& cfg, const fs::path& out) {
  const PointCloud cloud = io::read_cloud(require(cfg.cloud, "cloud"));
  const lidar::ExtractionResult res = lidar::extract_buildings(cloud, cfg.lidar);
  prepare(out);
  if (res.mask.count > 65535) throw Error(ErrorCode::kInvalidArgument, "too many regions for a 16-bit mask");
  io::write_label_pgm(out / kLidarMaskFile, res.mask);
  io::RegionsArtifact a = io::make_regions_artifact(res, kLidarMaskFile);
  io::write_json(out / kRegionsFile, io::to_json(a));
  return a;
}

io::SegmentsArtifact run_segment_image(const PipelineConfig& cfg, const fs::path& out) {
  const ImageU8 img = load_image(cfg);
  const image::SegmentationResult res = image::segment_image(img, cfg.image);
  prepare(out);
  if (res.mask.count > 65535) throw Error(ErrorCode::kInvalidArgument, "too many segments for a 16-bit mask");
  io::write_label_pgm(out / kImageMaskFile, res.mask);
  io::SegmentsArtifact a;
  a.geo = img.geo();
  a.width = img.width();
  a.height = img.height();
  a.raw_count = res.raw_count;
  a.sized_count = res.sized_count;
  a.mask = kImageMaskFile;
  a.segments = res.segments;
  io::write_json(out / kSegmentsFile, io::to_json(a));
  return a;
}

io::MatchesArtifact run_match(const PipelineConfig& cfg, const fs::path& out) {
  const io::RegionsArtifact regions = io::regions_from_json(io::read_json(require(cfg.regions, "regions")));
  const io::SegmentsArtifact segments = io::segments_from_json(io::read_json(require(cfg.segments, "segments")));
  const match::CenterSet a = lidar_centers(regions);
  const match::CenterSet b = image_centers(segments);

  match::MatchSet m = match::initial_match(a, b, std::nullopt, cfg.initial);
  io::MatchesArtifact art;
  art.initial_pairs = m.inlier_count();
  switch (cfg.method) {
    case MatchMethod::kGtm:
      m = match::gtm_filter(m, a, b, cfg.k);
      break;
    case MatchMethod::kRansac: {
      match::RansacOptions ro = cfg.ransac;
      ro.seed = cfg.seed;
      m = match::ransac_filter(m, a, b, ro);
      break;
    }
    case MatchMethod::kNone:
      break;
  }
  art.filtered_pairs = m.inlier_count();
  if (cfg.validate) m = match::area_direction_validate(m, a, b, cfg.validation);
  art.validated_pairs = m.inlier_count();
  art.method = std::string(method_name(cfg.method)) + (cfg.validate ? "+validated" : "");
  art.translation = m.translation;
  io::Json params = config_to_json(cfg);
  for (auto it = params.begin(); it != params.end();) {
    it = it.key().rfind("match.", 0) == 0 ? std::next(it) : params.erase(it);
  }
  art.parameters = params;
  for (const match::MatchPair& p : m.pairs) {
    const auto& reg = regions.regions[p.a];
    const auto& seg = segments.segments[p.b];
    art.pairs.push_back({reg.id, seg.label, Point3(reg.center.x(), reg.center.y(), reg.mean_z), seg.center,
                         seg.centroid_px, p.inlier});
  }
  spdlog::info("matching: {} initial, {} after {}, {} validated", art.initial_pairs, art.filtered_pairs,
               method_name(cfg.method), art.validated_pairs);
  prepare(out);
  io::write_json(out / kMatchesFile, io::to_json(art));
  return art;
}

io::PoseArtifact run_estimate_pose(const PipelineConfig& cfg, const fs::path& out) {
  const io::MatchesArtifact m = io::matches_from_json(io::read_json(require(cfg.matches, "matches")));
  std::vector<pose::Correspondence32> corr;
  for (const auto& p : m.pairs) {
    if (p.inlier) corr.push_back({p.lidar_center, p.image_pixel});
  }
  if (corr.size() < pose::kMinCorrespondences) {
    throw Error(ErrorCode::kDegenerateConfiguration,
                "only " + std::to_string(corr.size()) + " matched buildings; at least 6 are needed");
  }
  io::PoseArtifact art;
  art.estimate = pose::estimate_pose(corr, cfg.pose);
  art.correspondences = corr.size();
  prepare(out);
  io::write_json(out / kPoseFile, io::to_json(art));
  spdlog::info("pose: rms {:.3f} px over {} correspondences", art.estimate.rms, corr.size());
  if (!art.estimate.converged) {
    throw Error(ErrorCode::kNonConvergence, "Gold Standard did not converge; best estimate written");
  }
  return art;
}

io::MetricsArtifact run_register(const PipelineConfig& cfg, const fs::path& out) {
  PipelineConfig c = cfg;
  const io::RegionsArtifact regions = run_extract_lidar(c, out);
  const io::SegmentsArtifact segments = run_segment_image(c, out);
  c.regions = out / kRegionsFile;
  c.segments = out / kSegmentsFile;
  const io::MatchesArtifact matches = run_match(c, out);
  c.matches = out / kMatchesFile;
  const io::PoseArtifact pose = run_estimate_pose(c, out);

  io::MetricsArtifact met;
  met.lidar_regions = regions.regions.size();
  met.image_segments = segments.segments.size();
  met.initial_pairs = matches.initial_pairs;
  met.filtered_pairs = matches.filtered_pairs;
  met.validated_pairs = matches.validated_pairs;
  met.rms = pose.estimate.rms;
  if (!cfg.control_points.empty()) {
    const auto cps = io::control_points_from_json(io::read_json(cfg.control_points));
    met.control_points = cps.size();
    if (!cps.empty()) {
      met.shift_before = eval::relative_shift(eval::pairs_from_georef(cps, segments.geo));
      met.shift_after = eval::relative_shift(eval::pairs_from_projection(cps, pose.estimate.p));
      met.gain = eval::shift_gain(met.shift_before, met.shift_after);
    }
  }

  PointCloud cloud = io::read_cloud(cfg.cloud);
  if (!cfg.overlay_all_points) {
    PointCloud above;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      if (cloud.points[i].z() > regions.threshold) {
        above.points.push_back(cloud.points[i]);
        if (cloud.has_intensity()) above.intensity.push_back(cloud.intensity[i]);
      }
    }
    cloud = std::move(above);
  }
  const ImageU8 img = load_image(cfg);
  io::write_png(out / kOverlayBeforeFile, eval::render_overlay(img, cloud, eval::georef_camera(img.geo()), cfg.color_by));
  io::write_png(out / kOverlayAfterFile, eval::render_overlay(img, cloud, pose.estimate.p, cfg.color_by));
  io::write_json(out / kMetricsFile, io::to_json(met));
  io::write_text(out / kMetricsTableFile, io::metrics_table(met));
  return met;
}

void run_synth(const PipelineConfig& cfg, const fs::path& out) {
  synth::SceneSpec spec = cfg.synth;
  spec.seed = cfg.seed;
  synth::Scene scene = synth::generate_scene(spec);
  const CameraPose prior =
      synth::perturb_pose(scene.true_pose, cfg.synth_shift, cfg.synth_rotation, cfg.seed ^ 0x9e3779b97f4a7c15ull);
  scene.image.set_geo(synth::georef_from_pose(prior, scene.width, scene.height));

  prepare(out);
  io::write_cloud(out / ("cloud." + cfg.synth_cloud_format), scene.cloud);
  io::write_image(out / "image.png", scene.image);
  io::write_json(out / "control_points.json", io::to_json(synth::control_points(scene)));

  io::Json buildings = io::Json::array();
  for (const auto& b : scene.buildings) {
    io::Json fp = io::Json::array();
    for (const Vec2& p : b.footprint) fp.push_back({p.x(), p.y()});
    buildings.push_back({{"id", b.id},
                         {"shape", b.shape == synth::BuildingShape::kLShape ? "l_shape" : "rectangle"},
                         {"height", b.height},
                         {"area", b.area},
                         {"center", {b.center.x(), b.center.y()}},
                         {"footprint", fp}});
  }
  io::Json trees = io::Json::array();
  for (const auto& t : scene.trees) {
    trees.push_back({{"center", {t.center.x(), t.center.y()}}, {"radius", t.radius},
                     {"inner_radius", t.inner_radius}, {"gap_direction", t.gap_direction}, {"height", t.height}});
  }
  io::Json params = config_to_json(cfg);
  for (auto it = params.begin(); it != params.end();) {
    it = it.key().rfind("synth.", 0) == 0 || it.key() == "seed" ? std::next(it) : params.erase(it);
  }
  io::write_json(out / "truth.json", {{"kind", "synthetic_scene"},
                                      {"parameters", params},
                                      {"width", scene.width},
                                      {"height", scene.height},
                                      {"true_pose", io::to_json(scene.true_pose)},
                                      {"prior_pose", io::to_json(prior)},
                                      {"buildings", buildings},
                                      {"trees", trees}});
}

namespace {

void setup_logging() {
  auto logger = spdlog::get("georeg");
  if (!logger) {
    logger = spdlog::stderr_color_mt("georeg");
    logger->set_pattern("georeg: %l: %v");
  }
  spdlog::set_default_logger(logger);
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("GEOREG_LOG"); env && *env) {
    const std::string v(env);
    level = spdlog::level::from_str(v);
    if (level == spdlog::level::off && v != "off") {
      level = spdlog::level::warn;
      spdlog::warn("unrecognised GEOREG_LOG value '{}'", v);
    }
  }
  spdlog::set_level(level);
}

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  std::vector<std::string> sets;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "Flat key = value configuration file");
  app->add_option("--seed", c.seed, "Random seed");
  app->add_option("--out", c.out, "Output directory")->capture_default_str();
  app->add_option("--set", c.sets, "Override a configuration key (key=value)");
}

PipelineConfig build_config(const Common& c) {
  PipelineConfig cfg;
  if (!c.config.empty()) apply_config_file(cfg, c.config);
  for (const std::string& s : c.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kConfig, "--set expects key=value, got '" + s + "'");
    apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  if (c.seed) cfg.seed = *c.seed;
  return cfg;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  setup_logging();
  CLI::App app{"Coarse registration of airborne LiDAR to optical imagery through building regions", "georeg"};
  app.require_subcommand(1);

  Common common;
  std::string cloud, image_path, pan, regions, segments, matches, cps;

  auto* extract = app.add_subcommand("extract-lidar", "Extract building regions from a point cloud");
  add_common(extract, common);
  extract->add_option("--cloud", cloud, "Point cloud (.ply or ASCII x y z [class] [intensity])");

  auto* segment = app.add_subcommand("segment-image", "Segment an RGB image into building candidates");
  add_common(segment, common);
  segment->add_option("--image", image_path, "RGB image (.png/.ppm) with optional .wld");
  segment->add_option("--pan", pan, "Panchromatic band; --image is then the multispectral image");

  auto* match = app.add_subcommand("match", "Match LiDAR regions to image segments");
  add_common(match, common);
  match->add_option("--regions", regions, "regions.json from extract-lidar");
  match->add_option("--segments", segments, "segments.json from segment-image");

  auto* estimate = app.add_subcommand("estimate-pose", "Estimate the camera from matched centers");
  add_common(estimate, common);
  estimate->add_option("--matches", matches, "matches.json from match");

  auto* reg = app.add_subcommand("register", "Run the whole pipeline");
  add_common(reg, common);
  reg->add_option("--cloud", cloud, "Point cloud");
  reg->add_option("--image", image_path, "RGB image");
  reg->add_option("--pan", pan, "Panchromatic band");
  reg->add_option("--control-points", cps, "Control points JSON for shift metrics");

  auto* syn = app.add_subcommand("synth", "Write a synthetic scene bundle");
  add_common(syn, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitBadConfig;
  }

  try {
    PipelineConfig cfg = build_config(common);
    auto set_path = [](fs::path& dst, const std::string& v) {
      if (!v.empty()) dst = v;
    };
    set_path(cfg.cloud, cloud);
    set_path(cfg.image_path, image_path);
    set_path(cfg.pan, pan);
    set_path(cfg.regions, regions);
    set_path(cfg.segments, segments);
    set_path(cfg.matches, matches);
    set_path(cfg.control_points, cps);
    const fs::path out = common.out;

    if (extract->parsed()) {
      const auto a = run_extract_lidar(cfg, out);
      std::cout << a.regions.size() << " regions -> " << (out / kRegionsFile).string() << '\n';
    } else if (segment->parsed()) {
      const auto a = run_segment_image(cfg, out);
      std::cout << a.segments.size() << " segments -> " << (out / kSegmentsFile).string() << '\n';
    } else if (match->parsed()) {
      const auto a = run_match(cfg, out);
      std::cout << a.validated_pairs << " pairs -> " << (out / kMatchesFile).string() << '\n';
    } else if (estimate->parsed()) {
      const auto a = run_estimate_pose(cfg, out);
      std::cout << "rms " << a.estimate.rms << " px -> " << (out / kPoseFile).string() << '\n';
    } else if (reg->parsed()) {
      const auto m = run_register(cfg, out);
      std::cout << io::metrics_table(m);
    } else if (syn->parsed()) {
      run_synth(cfg, out);
      std::cout << "scene -> " << out.string() << '\n';
    }
  } catch (const Error& e) {
    std::cerr << "georeg: error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "georeg: error: " << e.what() << '\n';
    return kExitDataError;
  }
  return kExitOk;
}

}  // namespace georeg::cli
