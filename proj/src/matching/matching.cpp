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

#include "georeg/matching/matching.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <spdlog/spdlog.h>

namespace georeg::match {

void CenterSet::push_back(std::uint32_t id, const Vec2& center, double area, double angle,
                          double elongation) {
  ids.push_back(id);
  centers.push_back(center);
  areas.push_back(area);
  angles.push_back(angle);
  elongations.push_back(elongation);
}

std::size_t CenterSet::largest() const {
  if (areas.empty()) throw Error(ErrorCode::kInvalidArgument, "empty center set");
  return static_cast<std::size_t>(std::max_element(areas.begin(), areas.end()) - areas.begin());
}

void CenterSet::validate() const {
  const std::size_t n = ids.size();
  if (centers.size() != n || areas.size() != n || angles.size() != n || elongations.size() != n) {
    throw Error(ErrorCode::kInvalidArgument, "center set fields differ in length");
  }
  std::set<std::uint32_t> seen(ids.begin(), ids.end());
  if (seen.size() != n) throw Error(ErrorCode::kInvalidArgument, "duplicate center ids");
  for (const Vec2& c : centers) {
    if (!c.allFinite()) throw Error(ErrorCode::kInvalidArgument, "non-finite center");
  }
}

std::size_t MatchSet::inlier_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [](const MatchPair& p) { return p.inlier; }));
}

std::vector<std::size_t> MatchSet::inlier_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].inlier) out.push_back(i);
  }
  return out;
}

std::vector<MatchPair> mutual_nearest(const CenterSet& a, const CenterSet& b, const Vec2& t,
                                      double max_distance) {
  auto nearest = [](const Vec2& p, const std::vector<Vec2>& set, const Vec2& shift) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < set.size(); ++j) {
      const double d = (set[j] + shift - p).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    return best;
  };
  std::vector<MatchPair> out;
  if (a.empty() || b.empty()) return out;
  const double max_sq = max_distance * max_distance;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Vec2 p = a.centers[i] + t;
    const std::size_t j = nearest(p, b.centers, Vec2::Zero());
    if (nearest(b.centers[j], a.centers, t) != i) continue;
    if ((b.centers[j] - p).squaredNorm() > max_sq) continue;
    out.push_back({i, j, true});
  }
  return out;
}

namespace {

std::vector<std::size_t> largest_first(const CenterSet& s, int n) {
  std::vector<std::size_t> idx(s.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return s.areas[x] > s.areas[y]; });
  idx.resize(std::min<std::size_t>(idx.size(), static_cast<std::size_t>(std::max(n, 1))));
  return idx;
}

}  // namespace

MatchSet initial_match(const CenterSet& a, const CenterSet& b, std::optional<Vec2> pre_translation,
                       const InitialMatchOptions& options) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::kNoMutualPairs, "empty center set");
  a.validate();
  b.validate();
  MatchSet res;
  if (pre_translation) {
    res.translation = *pre_translation;
    res.pairs = mutual_nearest(a, b, res.translation, options.max_pair_distance);
  } else {
    res.pairs = mutual_nearest(a, b, Vec2::Zero(), options.max_pair_distance);
    const double needed = options.auto_fraction * static_cast<double>(std::min(a.size(), b.size()));
    const bool translate = options.pre_translation == PreTranslation::kOn ||
                           (options.pre_translation == PreTranslation::kAuto &&
                            static_cast<double>(res.pairs.size()) < needed);
    if (translate) {
      // With one candidate per side this is the largest-segment displacement.
      // More candidates vote by the number of mutual pairs they produce.
      const bool keep_zero = options.pre_translation == PreTranslation::kAuto;
      std::size_t best_count = keep_zero ? res.pairs.size() : 0;
      bool have = keep_zero;
      for (std::size_t ia : largest_first(a, options.translation_candidates)) {
        for (std::size_t ib : largest_first(b, options.translation_candidates)) {
          const Vec2 t = b.centers[ib] - a.centers[ia];
          auto pairs = mutual_nearest(a, b, t, options.max_pair_distance);
          if (!have || pairs.size() > best_count) {
            have = true;
            best_count = pairs.size();
            res.translation = t;
            res.pairs = std::move(pairs);
          }
        }
      }
      spdlog::debug("pre-translation ({:.2f}, {:.2f}) gives {} pairs", res.translation.x(),
                    res.translation.y(), res.pairs.size());
    }
  }
  if (res.pairs.empty()) throw Error(ErrorCode::kNoMutualPairs, "no mutual nearest neighbours");
  return res;
}

MedianKnnGraph median_knn_graph(std::span<const Vec2> points, int k) {
  const std::size_t n = points.size();
  if (k < 1 || n <= static_cast<std::size_t>(k)) {
    throw Error(ErrorCode::kTooFewPoints, "median K-NN graph needs more than K points");
  }
  std::vector<std::vector<std::pair<double, std::size_t>>> knn(n);
  std::vector<double> all;
  all.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, std::size_t>> d;
    d.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      d.emplace_back((points[i] - points[j]).norm(), j);
      if (j > i) all.push_back(d.back().first);
    }
    std::partial_sort(d.begin(), d.begin() + k, d.end());
    d.resize(k);
    knn[i] = std::move(d);
  }
  std::sort(all.begin(), all.end());
  const std::size_t m = all.size();
  MedianKnnGraph g;
  g.k = k;
  g.median = m % 2 ? all[m / 2] : 0.5 * (all[m / 2 - 1] + all[m / 2]);
  g.vertices.resize(n);
  std::iota(g.vertices.begin(), g.vertices.end(), std::size_t{0});
  g.adjacency = Adjacency::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [d, j] : knn[i]) {
      if (d <= g.median) g.adjacency(i, j) = g.adjacency(j, i) = 1;
    }
  }
  return g;
}

MatchSet gtm_filter(const MatchSet& matches, const CenterSet& a, const CenterSet& b, int k,
                    GtmReport* report) {
  std::vector<std::size_t> active = matches.inlier_indices();
  if (active.size() < static_cast<std::size_t>(k) + 2) {
    throw Error(ErrorCode::kDegenerateInput, "GTM needs at least K + 2 pairs");
  }
  GtmReport rep;
  std::vector<Vec2> pa, pb;
  for (;;) {
    if (active.size() < static_cast<std::size_t>(k) + 1) {
      throw Error(ErrorCode::kDegenerateInput, "GTM removed too many pairs before converging");
    }
    pa.clear();
    pb.clear();
    for (std::size_t i : active) {
      pa.push_back(a.centers[matches.pairs[i].a]);
      pb.push_back(b.centers[matches.pairs[i].b]);
    }
    const Adjacency ga = median_knn_graph(pa, k).adjacency;
    const Adjacency gb = median_knn_graph(pb, k).adjacency;
    const Eigen::MatrixXi r = (ga.cast<int>() - gb.cast<int>()).cwiseAbs();
    if (r.sum() == 0) {
      rep.final_a = ga;
      rep.final_b = gb;
      break;
    }
    Eigen::Index worst = 0;
    r.colwise().sum().maxCoeff(&worst);  // first maximum
    rep.removed.push_back(active[worst]);
    active.erase(active.begin() + worst);
    ++rep.iterations;
  }
  MatchSet out = matches;
  out.method = "gtm";
  for (std::size_t i : rep.removed) out.pairs[i].inlier = false;
  spdlog::debug("GTM: {} iterations, {} pairs kept", rep.iterations, out.inlier_count());
  if (report) *report = std::move(rep);
  return out;
}

std::optional<Eigen::Matrix<double, 2, 3>> fit_transform(std::span<const Vec2> src,
                                                         std::span<const Vec2> dst,
                                                         TransformModel model) {
  const std::size_t n = src.size();
  if (n != dst.size()) throw Error(ErrorCode::kInvalidArgument, "point lists differ in length");
  const std::size_t need = model == TransformModel::kSimilarity ? 2 : 3;
  if (n < need) return std::nullopt;
  Eigen::Matrix2Xd s(2, n), d(2, n);
  for (std::size_t i = 0; i < n; ++i) {
    s.col(i) = src[i];
    d.col(i) = dst[i];
  }
  const Eigen::Vector2d mean = s.rowwise().mean();
  const Eigen::Matrix2Xd centred = s.colwise() - mean;
  const double spread = centred.norm();
  if (!(spread > 1e-9 * (1.0 + mean.norm()))) return std::nullopt;
  if (model == TransformModel::kSimilarity) {
    const Eigen::Matrix3d t = Eigen::umeyama(s, d, true);
    if (!t.allFinite()) return std::nullopt;
    return Eigen::Matrix<double, 2, 3>(t.topRows<2>());
  }
  Eigen::MatrixX3d design(n, 3);
  for (std::size_t i = 0; i < n; ++i) design.row(i) << src[i].x(), src[i].y(), 1.0;
  Eigen::JacobiSVD<Eigen::MatrixX3d> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto sv = svd.singularValues();
  if (!(sv(2) > 1e-9 * sv(0))) return std::nullopt;
  Eigen::Matrix<double, 2, 3> t;
  t.row(0) = svd.solve(d.row(0).transpose()).transpose();
  t.row(1) = svd.solve(d.row(1).transpose()).transpose();
  return t;
}

MatchSet ransac_filter(const MatchSet& matches, const CenterSet& a, const CenterSet& b,
                       const RansacOptions& options, RansacReport* report) {
  const std::vector<std::size_t> active = matches.inlier_indices();
  const std::size_t sample = options.model == TransformModel::kSimilarity ? 2 : 3;
  if (active.size() < std::max<std::size_t>(3, sample)) {
    throw Error(ErrorCode::kNoConsensus, "RANSAC needs at least 3 pairs");
  }
  if (options.iterations < 1 || !(options.inlier_tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "RANSAC needs positive iterations and tolerance");
  }
  std::vector<Vec2> src, dst;
  for (std::size_t i : active) {
    src.push_back(a.centers[matches.pairs[i].a]);
    dst.push_back(b.centers[matches.pairs[i].b]);
  }
  auto score = [&](const Eigen::Matrix<double, 2, 3>& t, std::vector<char>* mask) {
    std::size_t count = 0;
    double total = 0.0;
    for (std::size_t i = 0; i < src.size(); ++i) {
      const double r = (t.leftCols<2>() * src[i] + t.col(2) - dst[i]).norm();
      const bool in = r <= options.inlier_tol;
      if (in) {
        ++count;
        total += r;
      }
      if (mask) (*mask)[i] = in;
    }
    return std::make_pair(count, total);
  };

  RansacReport rep;
  double best_residual = 0.0;
  std::vector<Vec2> ss(sample), sd(sample);
  std::vector<std::size_t> pick;
  for (int it = 0; it < options.iterations; ++it) {
    // Independent stream per iteration so the result does not depend on
    // evaluation order.
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(it)};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<std::size_t> dist(0, src.size() - 1);
    pick.clear();
    while (pick.size() < sample) {
      const std::size_t c = dist(rng);
      if (std::find(pick.begin(), pick.end(), c) == pick.end()) pick.push_back(c);
    }
    for (std::size_t s = 0; s < sample; ++s) {
      ss[s] = src[pick[s]];
      sd[s] = dst[pick[s]];
    }
    const auto model = fit_transform(ss, sd, options.model);
    if (!model) continue;
    const auto [count, total] = score(*model, nullptr);
    if (count > rep.inliers || (count == rep.inliers && rep.best_iteration >= 0 && total < best_residual) ||
        rep.best_iteration < 0) {
      rep.inliers = count;
      rep.transform = *model;
      rep.best_iteration = it;
      best_residual = total;
    }
  }
  if (rep.best_iteration < 0 || rep.inliers < sample + 1) {
    throw Error(ErrorCode::kNoConsensus, "no transform explains more than a minimal sample");
  }
  std::vector<char> mask(src.size());
  score(rep.transform, &mask);
  std::vector<Vec2> rs, rd;
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (mask[i]) {
      rs.push_back(src[i]);
      rd.push_back(dst[i]);
    }
  }
  if (const auto refit = fit_transform(rs, rd, options.model)) {
    std::vector<char> refit_mask(src.size());
    const auto [count, total] = score(*refit, &refit_mask);
    if (count >= rep.inliers) {
      rep.transform = *refit;
      rep.inliers = count;
      mask = std::move(refit_mask);
    }
  }
  MatchSet out = matches;
  out.method = "ransac";
  for (std::size_t i = 0; i < active.size(); ++i) out.pairs[active[i]].inlier = mask[i] != 0;
  spdlog::debug("RANSAC: best iteration {}, {} inliers", rep.best_iteration, rep.inliers);
  if (report) *report = rep;
  return out;
}

double axis_difference(double angle_a, double angle_b) {
  double d = std::fmod(std::abs(angle_a - angle_b), M_PI);
  return std::min(d, M_PI - d);
}

MatchSet area_direction_validate(const MatchSet& matches, const CenterSet& a, const CenterSet& b,
                                 const ValidationOptions& options) {
  MatchSet out = matches;
  out.method = matches.method + "+validated";
  for (MatchPair& p : out.pairs) {
    if (!p.inlier) continue;
    const double aa = a.areas[p.a];
    const double ab = b.areas[p.b];
    const double ratio = std::max(aa, ab) / std::min(aa, ab);
    bool keep = std::min(aa, ab) > 0.0 && ratio <= options.area_ratio_tol;
    const bool oriented = a.elongations[p.a] >= options.min_elongation &&
                          b.elongations[p.b] >= options.min_elongation;
    if (keep && oriented) keep = axis_difference(a.angles[p.a], b.angles[p.b]) <= options.angle_tol;
    p.inlier = keep;
  }
  return out;
}

}  // namespace georeg::match
