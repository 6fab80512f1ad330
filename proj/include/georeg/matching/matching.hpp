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

// Correspondences between LiDAR region centers (set a) and image segment
// centers (set b): mutual nearest neighbours with an optional translation,
// then outlier filters that only clear inlier flags.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "georeg/core/types.hpp"

namespace georeg::match {

inline constexpr int kDefaultK = 4;

struct CenterSet {
  std::vector<std::uint32_t> ids;
  std::vector<Vec2> centers;      // world, meters
  std::vector<double> areas;      // m^2
  std::vector<double> angles;     // MBR long axis, radians
  std::vector<double> elongations;  // MBR length / width

  std::size_t size() const noexcept { return ids.size(); }
  bool empty() const noexcept { return ids.empty(); }
  void push_back(std::uint32_t id, const Vec2& center, double area = 0.0, double angle = 0.0,
                 double elongation = 1.0);
  // Index of the largest area, lowest index on ties.
  std::size_t largest() const;
  // Throws kInvalidArgument on duplicate ids, mismatched lengths or
  // non-finite centers.
  void validate() const;
};

struct MatchPair {
  std::size_t a = 0;  // index into set a
  std::size_t b = 0;  // index into set b
  bool inlier = true;
};

struct MatchSet {
  std::vector<MatchPair> pairs;
  Vec2 translation = Vec2::Zero();  // added to a-centers before matching
  std::string method = "initial";

  std::size_t inlier_count() const noexcept;
  std::vector<std::size_t> inlier_indices() const;
};

enum class PreTranslation { kOff, kAuto, kOn };

struct InitialMatchOptions {
  PreTranslation pre_translation = PreTranslation::kAuto;
  // Largest segments on each side tried as translation anchors; 1 uses the
  // single largest pair only.
  int translation_candidates = 1;
  // Mutual pairs farther apart than this (after translation) are dropped.
  double max_pair_distance = std::numeric_limits<double>::infinity();
  // kAuto translates when fewer than this fraction of min(|a|, |b|) pairs
  // are found without translation.
  double auto_fraction = 0.5;
};

// Mutual nearest neighbours of (a + t) and b; ties go to the lower index.
std::vector<MatchPair> mutual_nearest(const CenterSet& a, const CenterSet& b, const Vec2& t,
                                      double max_distance);

// Throws kNoMutualPairs when no pair survives. An explicit `pre_translation`
// is used as is.
MatchSet initial_match(const CenterSet& a, const CenterSet& b,
                       std::optional<Vec2> pre_translation = std::nullopt,
                       const InitialMatchOptions& options = {});

using Adjacency = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

struct MedianKnnGraph {
  std::vector<std::size_t> vertices;
  Adjacency adjacency;
  int k = kDefaultK;
  double median = 0.0;  // median of all pairwise distances
};

// Edge i-j when j is among the K nearest of i (or i among those of j) and
// their distance does not exceed the median of all pairwise distances.
// Neighbour ties go to the lower index. Throws kTooFewPoints unless |points| > K.
MedianKnnGraph median_knn_graph(std::span<const Vec2> points, int k = kDefaultK);

struct GtmReport {
  int iterations = 0;
  std::vector<std::size_t> removed;  // pair indices, in removal order
  Adjacency final_a;
  Adjacency final_b;
};

// Graph Transformation Matching over the inlier pairs. Throws
// kDegenerateInput with fewer than K + 2 pairs or when the graphs never
// agree before K + 1 pairs remain.
MatchSet gtm_filter(const MatchSet& matches, const CenterSet& a, const CenterSet& b,
                    int k = kDefaultK, GtmReport* report = nullptr);

enum class TransformModel { kSimilarity, kAffine };

struct RansacOptions {
  TransformModel model = TransformModel::kSimilarity;
  double inlier_tol = 5.0;  // meters
  int iterations = 1000;
  std::uint64_t seed = 0;
};

struct RansacReport {
  Eigen::Matrix<double, 2, 3> transform = Eigen::Matrix<double, 2, 3>::Zero();  // a -> b
  std::size_t inliers = 0;
  int best_iteration = -1;
};

// Least-squares 2D transform mapping src onto dst. Similarity needs 2
// points, affine 3; returns nullopt for degenerate samples.
std::optional<Eigen::Matrix<double, 2, 3>> fit_transform(std::span<const Vec2> src,
                                                         std::span<const Vec2> dst,
                                                         TransformModel model);

// Throws kNoConsensus when no model explains more than its minimal sample.
MatchSet ransac_filter(const MatchSet& matches, const CenterSet& a, const CenterSet& b,
                       const RansacOptions& options = {}, RansacReport* report = nullptr);

struct ValidationOptions {
  double area_ratio_tol = 1.5;
  double angle_tol = 0.2617993877991494;  // 15 degrees
  // Skip the angle test when either MBR is less elongated than this; 1.0
  // always tests.
  double min_elongation = 1.0;
};

// Unoriented axis difference in [0, pi/2].
double axis_difference(double angle_a, double angle_b);

MatchSet area_direction_validate(const MatchSet& matches, const CenterSet& a, const CenterSet& b,
                                 const ValidationOptions& options = {});

}  // namespace georeg::match
