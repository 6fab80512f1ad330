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

#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>

#include "georeg/cli/cli.hpp"
#include "georeg/cli/config.hpp"
#include "georeg/io/cloud_io.hpp"
#include "georeg/io/raster_io.hpp"
#include "test_util.hpp"

using namespace georeg;
using namespace georeg::cli;
namespace fs = std::filesystem;
using testutil::TempDir;

namespace {

// Runs the georeg binary; returns its exit status. Output goes to `log`.
int run_georeg(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + GEOREG_BINARY + "\" " + args + " >\"" + log.string() +
                          "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

std::map<std::string, std::string> dir_contents(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file()) out[e.path().filename().string()] = testutil::slurp(e.path());
  return out;
}

// Synthetic scene bundle shared by several cases.
const fs::path& scene_dir() {
  static TempDir dir("georeg-cli-scene");
  static bool made = false;
  if (!made) {
    REQUIRE(run_georeg("synth --seed 3 --out " + q(dir.path()), dir / "log.txt") == 0);
    fs::remove(dir / "log.txt");
    made = true;
  }
  return dir.path();
}

}  // namespace

TEST_CASE("config text parsing") {
  PipelineConfig cfg;
  apply_config_text(cfg, "# comment\n\nseed = 42\nmatch.K=5  # trailing\nimage.use_L = false\nmatch.method = ransac\n");
  CHECK(cfg.seed == 42);
  CHECK(cfg.k == 5);
  CHECK_FALSE(cfg.image.mean_shift.use_L);
  CHECK(cfg.method == MatchMethod::kRansac);

  try {
    apply_config_text(cfg, "seed = 1\nno.such.key = 3\n", "my.cfg");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConfig);
    CHECK(std::string(e.what()).find("my.cfg:2") != std::string::npos);
  }
  CHECK_THROWS_AS(apply_config_text(cfg, "match.K = many\n"), Error);
  CHECK_THROWS_AS(apply_config_text(cfg, "lidar.se_size = 4\n"), Error);
  CHECK_THROWS_AS(apply_config_text(cfg, "just a line\n"), Error);
  CHECK_THROWS_AS(apply_config_file(cfg, "/nonexistent/georeg.cfg"), Error);

  // Every advertised key round-trips through the JSON dump (input paths excluded).
  const io::Json j = config_to_json(PipelineConfig{});
  for (const std::string& k : config_keys()) {
    if (k.rfind("input.", 0) == 0) continue;
    CHECK(j.contains(k));
  }
}

TEST_CASE("exit codes") {
  TempDir dir;
  const fs::path log = dir / "log.txt";
  CHECK(run_georeg("--help", log) == 0);
  CHECK(run_georeg("", log) == kExitBadConfig);
  CHECK(run_georeg("frobnicate", log) == kExitBadConfig);
  CHECK(run_georeg("extract-lidar --bogus-flag", log) == kExitBadConfig);

  testutil::spit(dir / "bad.cfg", "lidar.se_size = banana\n");
  CHECK(run_georeg("extract-lidar --config " + q(dir / "bad.cfg") + " --cloud x.ply --out " + q(dir / "o"), log) ==
        kExitBadConfig);
  CHECK(run_georeg("extract-lidar --set nonsense --cloud x.ply --out " + q(dir / "o"), log) == kExitBadConfig);

  CHECK(run_georeg("extract-lidar --cloud " + q(dir / "missing.ply") + " --out " + q(dir / "o"), log) == kExitDataError);
  testutil::spit(dir / "empty.xyz", "# nothing here\n");
  CHECK(run_georeg("extract-lidar --cloud " + q(dir / "empty.xyz") + " --out " + q(dir / "o"), log) == kExitDataError);
  CHECK(testutil::slurp(log).find("EmptyCloud") != std::string::npos);

  CHECK(exit_code(ErrorCode::kNonConvergence) == kExitNonConvergence);
  CHECK(exit_code(ErrorCode::kNoConsensus) == kExitDegenerate);
  CHECK(exit_code(ErrorCode::kIo) == kExitDataError);
}

TEST_CASE("too few buildings is degenerate") {
  TempDir dir;
  const fs::path log = dir / "log.txt";
  REQUIRE(run_georeg("synth --seed 2 --set synth.buildings=4 --set synth.trees=0 --out " + q(dir / "s"), log) == 0);
  const int rc = run_georeg("register --cloud " + q(dir / "s/cloud.ply") + " --image " + q(dir / "s/image.png") +
                            " --out " + q(dir / "r"),
                        log);
  CHECK(rc == kExitDegenerate);
}

TEST_CASE("three-building scene gives three regions") {
  TempDir dir;
  const fs::path log = dir / "log.txt";
  REQUIRE(run_georeg("synth --seed 5 --set synth.buildings=3 --set synth.trees=0 --out " + q(dir / "s"), log) == 0);
  REQUIRE(run_georeg("extract-lidar --cloud " + q(dir / "s/cloud.ply") + " --out " + q(dir / "e"), log) == 0);
  const io::Json j = io::read_json(dir / "e" / kRegionsFile);
  CHECK(j.at("regions").size() == 3);
}

TEST_CASE("constant image yields no segments") {
  TempDir dir;
  ImageU8 img(200, 200, 3, GeoTransform{0, 100, 0.5}, 128);
  io::write_image(dir / "flat.png", img);
  REQUIRE(run_georeg("segment-image --image " + q(dir / "flat.png") + " --out " + q(dir / "o"), dir / "log.txt") == 0);
  const io::Json j = io::read_json(dir / "o" / kSegmentsFile);
  CHECK(j.at("segments").empty());
  CHECK(j.at("raw_count") == 1);
}

TEST_CASE("every subcommand is byte-reproducible") {
  const fs::path& s = scene_dir();
  TempDir dir;
  const fs::path log = dir / "log.txt";
  const std::string cloud = " --cloud " + q(s / "cloud.ply");
  const std::string image = " --image " + q(s / "image.png");
  for (int run = 0; run < 2; ++run) {
    const fs::path o = dir / ("run" + std::to_string(run));
    REQUIRE(run_georeg("synth --seed 11 --out " + q(o / "synth"), log) == 0);
    REQUIRE(run_georeg("extract-lidar" + cloud + " --out " + q(o / "stages"), log) == 0);
    REQUIRE(run_georeg("segment-image" + image + " --out " + q(o / "stages"), log) == 0);
    REQUIRE(run_georeg("match --regions " + q(o / "stages" / kRegionsFile) + " --segments " +
                       q(o / "stages" / kSegmentsFile) + " --out " + q(o / "stages"),
                   log) == 0);
    REQUIRE(run_georeg("estimate-pose --matches " + q(o / "stages" / kMatchesFile) + " --out " + q(o / "stages"), log) ==
            0);
    REQUIRE(run_georeg("register" + cloud + image + " --control-points " + q(s / "control_points.json") + " --out " +
                       q(o / "register"),
                   log) == 0);
  }
  for (const char* sub : {"synth", "stages", "register"}) {
    const auto a = dir_contents(dir / "run0" / sub), b = dir_contents(dir / "run1" / sub);
    REQUIRE(!a.empty());
    CHECK(a.size() == b.size());
    for (const auto& [name, bytes] : a) {
      INFO(sub << "/" << name);
      CHECK(b.count(name) == 1);
      CHECK((b.count(name) && b.at(name) == bytes));
    }
  }
  // register is the composition of the stages.
  for (const char* f : {kRegionsFile, kSegmentsFile, kMatchesFile, kPoseFile}) {
    INFO(f);
    CHECK(testutil::slurp(dir / "run0" / "stages" / f) == testutil::slurp(dir / "run0" / "register" / f));
  }
}

TEST_CASE("register recovers a 40 m shift") {
  const fs::path& s = scene_dir();
  TempDir dir;
  REQUIRE(run_georeg("register --cloud " + q(s / "cloud.ply") + " --image " + q(s / "image.png") +
                     " --control-points " + q(s / "control_points.json") + " --out " + q(dir.path()),
                 dir / "log.txt") == 0);
  const io::Json m = io::read_json(dir / kMetricsFile);
  CHECK(m.at("shift_before_m").get<double>() == doctest::Approx(40.0).epsilon(0.05));
  CHECK(m.at("gain_percent").get<double>() > 90.0);
  CHECK(fs::exists(dir / kOverlayBeforeFile));
  CHECK(fs::exists(dir / kOverlayAfterFile));
}

TEST_CASE("command line overrides the config file") {
  TempDir dir;
  testutil::spit(dir / "a.cfg", "synth.buildings = 25\nseed = 4\n");
  const fs::path log = dir / "log.txt";
  REQUIRE(run_georeg("synth --config " + q(dir / "a.cfg") + " --set synth.buildings=12 --seed 9 --out " + q(dir / "s"),
                 log) == 0);
  const io::Json t = io::read_json(dir / "s/truth.json");
  CHECK(t.at("buildings").size() == 12);
  CHECK(t.at("parameters").at("seed") == "9");  // recorded in config-file form
}

TEST_CASE("GEOREG_LOG controls diagnostics") {
  const fs::path& s = scene_dir();
  TempDir dir;
  const std::string args = "extract-lidar --cloud " + q(s / "cloud.ply") + " --out " + q(dir / "o");
  REQUIRE(run_georeg(args, dir / "quiet.txt") == 0);
  ::setenv("GEOREG_LOG", "debug", 1);
  REQUIRE(run_georeg(args, dir / "loud.txt") == 0);
  ::unsetenv("GEOREG_LOG");
  CHECK(testutil::slurp(dir / "loud.txt").size() > testutil::slurp(dir / "quiet.txt").size());
}
