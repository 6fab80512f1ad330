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

#include "georeg/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

namespace georeg::cli {
namespace {

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view why) {
  throw Error(ErrorCode::kConfig, std::string(key) + " = '" + std::string(value) + "': " + std::string(why));
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out)) bad(key, v, "expected a number");
  return out;
}

long long parse_int(std::string_view key, std::string_view v) {
  long long out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) bad(key, v, "expected an integer");
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad(key, v, "expected true or false");
}

std::string fmt_double(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

struct Entry {
  std::string key;
  std::function<void(PipelineConfig&, std::string_view)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

template <class F>
Entry real(std::string key, F ref, double lo, double hi, bool lo_open = false) {
  return {key,
          [=](PipelineConfig& c, std::string_view v) {
            const double x = parse_double(key, v);
            if (x < lo || x > hi || (lo_open && x == lo)) {
              bad(key, v, "outside " + std::string(lo_open ? "(" : "[") + fmt_double(lo) + ", " + fmt_double(hi) + "]");
            }
            ref(c) = x;
          },
          [=](const PipelineConfig& c) { return fmt_double(ref(const_cast<PipelineConfig&>(c))); }};
}

template <class T, class F>
Entry integer(std::string key, F ref, long long lo, long long hi) {
  return {key,
          [=](PipelineConfig& c, std::string_view v) {
            const long long x = parse_int(key, v);
            if (x < lo || x > hi) bad(key, v, "outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
            ref(c) = static_cast<T>(x);
          },
          [=](const PipelineConfig& c) { return std::to_string(ref(const_cast<PipelineConfig&>(c))); }};
}

template <class F>
Entry boolean(std::string key, F ref) {
  return {key, [=](PipelineConfig& c, std::string_view v) { ref(c) = parse_bool(key, v); },
          [=](const PipelineConfig& c) { return std::string(ref(const_cast<PipelineConfig&>(c)) ? "true" : "false"); }};
}

template <class F>
Entry path(std::string key, F ref) {
  return {key, [=](PipelineConfig& c, std::string_view v) { ref(c) = std::filesystem::path(std::string(v)); },
          [=](const PipelineConfig& c) { return ref(const_cast<PipelineConfig&>(c)).string(); }};
}

template <class E, class F>
Entry choice(std::string key, F ref, std::vector<std::pair<std::string, E>> options) {
  return {key,
          [=](PipelineConfig& c, std::string_view v) {
            for (const auto& [name, value] : options) {
              if (v == name) {
                ref(c) = value;
                return;
              }
            }
            std::string all;
            for (const auto& o : options) all += (all.empty() ? "" : "|") + o.first;
            bad(key, v, "expected " + all);
          },
          [=](const PipelineConfig& c) {
            for (const auto& [name, value] : options) {
              if (ref(const_cast<PipelineConfig&>(c)) == value) return name;
            }
            return std::string("?");
          }};
}

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDeg = M_PI / 180.0;

const std::vector<Entry>& entries() {
  using C = PipelineConfig;
  static const std::vector<Entry> table = [] {
    std::vector<Entry> t;
    t.push_back(integer<std::uint64_t>("seed", [](C& c) -> std::uint64_t& { return c.seed; }, 0,
                                       std::numeric_limits<long long>::max()));

    t.push_back(real("lidar.resolution", [](C& c) -> double& { return c.lidar.resolution; }, 0.0, 100.0));
    t.push_back(integer<int>("lidar.se_size", [](C& c) -> int& { return c.lidar.se_size; }, 3, 99));
    {
      auto odd = t.back().set;
      t.back().set = [odd](C& c, std::string_view v) {
        odd(c, v);
        if (c.lidar.se_size % 2 == 0) bad("lidar.se_size", v, "must be odd");
      };
    }
    t.push_back(real("lidar.min_area", [](C& c) -> double& { return c.lidar.min_area; }, 0.0, 1e9));
    t.push_back(boolean("lidar.ground_fallback",
                        [](C& c) -> bool& { return c.lidar.elevation.lowest_decile_fallback; }));

    t.push_back(real("image.bandwidth", [](C& c) -> double& { return c.image.mean_shift.bandwidth; }, 0.0, 1000.0, true));
    t.push_back(real("image.spatial_radius", [](C& c) -> double& { return c.image.mean_shift.spatial_radius; }, 0.0, 1e4));
    t.push_back(boolean("image.use_L", [](C& c) -> bool& { return c.image.mean_shift.use_L; }));
    t.push_back(integer<int>("image.max_iterations", [](C& c) -> int& { return c.image.mean_shift.max_iterations; }, 1, 100000));
    t.push_back(real("image.convergence_tol", [](C& c) -> double& { return c.image.mean_shift.convergence_tol; }, 0.0, 1.0, true));
    t.push_back(real("image.merge_distance", [](C& c) -> double& { return c.image.mean_shift.min_merge_distance; }, 0.0, 1000.0));
    t.push_back(integer<std::size_t>("image.min_px", [](C& c) -> std::size_t& { return c.image.min_px; }, 0, 1LL << 40));
    t.push_back(integer<std::size_t>("image.max_px", [](C& c) -> std::size_t& { return c.image.max_px; }, 1, 1LL << 40));
    t.push_back(real("image.filling_threshold", [](C& c) -> double& { return c.image.filling_threshold; }, 0.0, 100.0));

    t.push_back(choice<MatchMethod>("match.method", [](C& c) -> MatchMethod& { return c.method; },
                                    {{"gtm", MatchMethod::kGtm}, {"ransac", MatchMethod::kRansac}, {"none", MatchMethod::kNone}}));
    t.push_back(integer<int>("match.K", [](C& c) -> int& { return c.k; }, 1, 64));
    t.push_back(choice<match::PreTranslation>(
        "match.pre_translation", [](C& c) -> match::PreTranslation& { return c.initial.pre_translation; },
        {{"auto", match::PreTranslation::kAuto}, {"on", match::PreTranslation::kOn}, {"off", match::PreTranslation::kOff}}));
    t.push_back(integer<int>("match.translation_candidates",
                             [](C& c) -> int& { return c.initial.translation_candidates; }, 1, 100));
    t.push_back(real("match.max_pair_distance", [](C& c) -> double& { return c.initial.max_pair_distance; }, 0.0, kInf, true));
    t.push_back(real("match.auto_fraction", [](C& c) -> double& { return c.initial.auto_fraction; }, 0.0, 1.0));
    t.push_back(choice<match::TransformModel>(
        "match.ransac_model", [](C& c) -> match::TransformModel& { return c.ransac.model; },
        {{"similarity", match::TransformModel::kSimilarity}, {"affine", match::TransformModel::kAffine}}));
    t.push_back(real("match.ransac_tol", [](C& c) -> double& { return c.ransac.inlier_tol; }, 0.0, 1e6, true));
    t.push_back(integer<int>("match.ransac_iterations", [](C& c) -> int& { return c.ransac.iterations; }, 1, 10000000));
    t.push_back(boolean("match.validate", [](C& c) -> bool& { return c.validate; }));
    t.push_back(real("match.area_ratio_tol", [](C& c) -> double& { return c.validation.area_ratio_tol; }, 1.0, 1e6));
    t.push_back({"match.angle_tol_deg",
                 [](C& c, std::string_view v) {
                   const double x = parse_double("match.angle_tol_deg", v);
                   if (x < 0.0 || x > 90.0) bad("match.angle_tol_deg", v, "outside [0, 90]");
                   c.validation.angle_tol = x * kDeg;
                 },
                 [](const C& c) { return fmt_double(c.validation.angle_tol / kDeg); }});
    t.push_back(real("match.min_elongation", [](C& c) -> double& { return c.validation.min_elongation; }, 1.0, 1e6));

    t.push_back(integer<int>("pose.max_iterations", [](C& c) -> int& { return c.pose.max_iterations; }, 1, 1000000));
    t.push_back(real("pose.rel_tol", [](C& c) -> double& { return c.pose.rel_tol; }, 0.0, 1.0, true));

    t.push_back(choice<eval::ColorBy>("overlay.color_by", [](C& c) -> eval::ColorBy& { return c.color_by; },
                                      {{"elevation", eval::ColorBy::kElevation}, {"intensity", eval::ColorBy::kIntensity}}));
    t.push_back(boolean("overlay.all_points", [](C& c) -> bool& { return c.overlay_all_points; }));

    t.push_back(real("synth.extent", [](C& c) -> double& { return c.synth.extent; }, 0.0, 1e5, true));
    t.push_back(real("synth.origin_x", [](C& c) -> double& { return c.synth.origin_x; }, -1e8, 1e8));
    t.push_back(real("synth.origin_y", [](C& c) -> double& { return c.synth.origin_y; }, -1e8, 1e8));
    t.push_back(integer<int>("synth.buildings", [](C& c) -> int& { return c.synth.n_buildings; }, 0, 100000));
    t.push_back(real("synth.min_height", [](C& c) -> double& { return c.synth.min_height; }, 0.0, 1e3, true));
    t.push_back(real("synth.max_height", [](C& c) -> double& { return c.synth.max_height; }, 0.0, 1e3, true));
    t.push_back(real("synth.min_size", [](C& c) -> double& { return c.synth.min_size; }, 8.0, 1e4));
    t.push_back(real("synth.max_size", [](C& c) -> double& { return c.synth.max_size; }, 8.0, 1e4));
    t.push_back(real("synth.l_shape_fraction", [](C& c) -> double& { return c.synth.l_shape_fraction; }, 0.0, 1.0));
    t.push_back(real("synth.margin", [](C& c) -> double& { return c.synth.margin; }, 0.0, 1e4));
    t.push_back(integer<int>("synth.trees", [](C& c) -> int& { return c.synth.n_trees; }, 0, 100000));
    t.push_back(real("synth.min_tree_radius", [](C& c) -> double& { return c.synth.min_tree_radius; }, 0.0, 1e3, true));
    t.push_back(real("synth.max_tree_radius", [](C& c) -> double& { return c.synth.max_tree_radius; }, 0.0, 1e3, true));
    t.push_back(real("synth.min_tree_height", [](C& c) -> double& { return c.synth.min_tree_height; }, 0.0, 1e3, true));
    t.push_back(real("synth.max_tree_height", [](C& c) -> double& { return c.synth.max_tree_height; }, 0.0, 1e3, true));
    t.push_back(real("synth.density", [](C& c) -> double& { return c.synth.density; }, 0.0, 1e3, true));
    t.push_back(real("synth.resolution", [](C& c) -> double& { return c.synth.resolution; }, 0.0, 1e3, true));
    t.push_back(real("synth.altitude", [](C& c) -> double& { return c.synth.altitude; }, 0.0, 1e6, true));
    t.push_back(real("synth.point_jitter", [](C& c) -> double& { return c.synth.point_jitter; }, 0.0, 100.0));
    t.push_back(real("synth.color_noise", [](C& c) -> double& { return c.synth.color_noise; }, 0.0, 255.0));
    t.push_back(real("synth.shift", [](C& c) -> double& { return c.synth_shift; }, 0.0, 1e5));
    t.push_back(real("synth.rotation", [](C& c) -> double& { return c.synth_rotation; }, 0.0, M_PI));
    t.push_back(choice<std::string>("synth.cloud_format", [](C& c) -> std::string& { return c.synth_cloud_format; },
                                    {{"ply", "ply"}, {"xyz", "xyz"}}));

    t.push_back(path("input.cloud", [](C& c) -> std::filesystem::path& { return c.cloud; }));
    t.push_back(path("input.image", [](C& c) -> std::filesystem::path& { return c.image_path; }));
    t.push_back(path("input.pan", [](C& c) -> std::filesystem::path& { return c.pan; }));
    t.push_back(path("input.regions", [](C& c) -> std::filesystem::path& { return c.regions; }));
    t.push_back(path("input.segments", [](C& c) -> std::filesystem::path& { return c.segments; }));
    t.push_back(path("input.matches", [](C& c) -> std::filesystem::path& { return c.matches; }));
    t.push_back(path("input.control_points", [](C& c) -> std::filesystem::path& { return c.control_points; }));
    return t;
  }();
  return table;
}

}  // namespace

PipelineConfig::PipelineConfig() {
  // Pipeline defaults that differ from the library operations' defaults.
  initial.translation_candidates = 3;
  initial.max_pair_distance = 15.0;
  validation.min_elongation = 1.2;
}

void apply_setting(PipelineConfig& cfg, std::string_view key, std::string_view value) {
  for (const Entry& e : entries()) {
    if (e.key == key) {
      e.set(cfg, value);
      return;
    }
  }
  throw Error(ErrorCode::kConfig, "unknown configuration key '" + std::string(key) + "'");
}

void apply_config_text(PipelineConfig& cfg, std::string_view text, std::string_view source) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kConfig, std::string(source) + ":" + std::to_string(line_no) + ": expected key = value");
    }
    try {
      apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfig, std::string(source) + ":" + std::to_string(line_no) + ": " + e.detail());
    }
  }
}

void apply_config_file(PipelineConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  apply_config_text(cfg, ss.str(), path.string());
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const Entry& e : entries()) out.push_back(e.key);
  return out;
}

io::Json config_to_json(const PipelineConfig& cfg) {
  io::Json j = io::Json::object();
  for (const Entry& e : entries()) {
    if (e.key.rfind("input.", 0) == 0) continue;
    j[e.key] = e.get(cfg);
  }
  return j;
}

}  // namespace georeg::cli
