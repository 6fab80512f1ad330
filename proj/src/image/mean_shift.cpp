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

#include "georeg/image/mean_shift.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include <spdlog/spdlog.h>

#include "georeg/core/regions.hpp"

namespace georeg::image {
namespace {

constexpr int kKeyBits = 21;
constexpr std::int64_t kKeyBias = std::int64_t{1} << (kKeyBits - 1);

struct VecHash {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint64_t x : v) {
      h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

double dist2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

}  // namespace

void MeanShiftConfig::validate() const {
  if (!(bandwidth > 0.0)) throw Error(ErrorCode::kConfig, "mean shift bandwidth must be positive");
  if (spatial_radius < 0.0) throw Error(ErrorCode::kConfig, "spatial radius must be >= 0");
  if (max_iterations < 1) throw Error(ErrorCode::kConfig, "max_iterations must be >= 1");
  if (!(convergence_tol > 0.0)) throw Error(ErrorCode::kConfig, "convergence_tol must be positive");
}

ModeSeeker::ModeSeeker(std::vector<std::vector<double>> coords, std::vector<double> weights,
                       double radius, std::vector<int> grid_dims)
    : weights_(std::move(weights)), radius_(radius), grid_dims_(std::move(grid_dims)) {
  if (coords.empty() || coords.size() > static_cast<std::size_t>(simd::kMaxDims)) {
    throw Error(ErrorCode::kInvalidArgument, "mode seeking supports 1 to 6 dimensions");
  }
  if (grid_dims_.empty() || grid_dims_.size() > 3) {
    throw Error(ErrorCode::kInvalidArgument, "grid must use 1 to 3 dimensions");
  }
  const std::size_t n = weights_.size();
  for (const auto& c : coords) {
    if (c.size() != n) throw Error(ErrorCode::kInvalidArgument, "coordinate planes differ in length");
  }

  std::vector<std::uint64_t> keys(n);
  std::vector<double> p(coords.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < coords.size(); ++d) p[d] = coords[d][i];
    keys[i] = cell_key(p, nullptr);
  }
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(),
                   [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  where_.resize(n);
  coords_.assign(coords.size(), std::vector<double>(n));
  std::vector<double> w(n);
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t i = order_[s];
    where_[i] = s;
    for (std::size_t d = 0; d < coords.size(); ++d) coords_[d][s] = coords[d][i];
    w[s] = weights_[i];
  }
  weights_ = std::move(w);
  for (std::size_t s = 0; s < n;) {
    std::size_t e = s;
    const std::uint64_t k = keys[order_[s]];
    while (e < n && keys[order_[e]] == k) ++e;
    cells_.emplace(k, std::make_pair(s, e));
    s = e;
  }
}

std::uint64_t ModeSeeker::cell_key(std::span<const double> p, const int* offset) const {
  std::uint64_t key = 0;
  for (std::size_t g = 0; g < grid_dims_.size(); ++g) {
    std::int64_t c = static_cast<std::int64_t>(std::floor(p[grid_dims_[g]] / radius_));
    if (offset) c += offset[g];
    const std::uint64_t biased = static_cast<std::uint64_t>(std::clamp<std::int64_t>(c + kKeyBias, 0, (kKeyBias << 1) - 1));
    key = (key << kKeyBits) | biased;
  }
  return key;
}

simd::WindowSums ModeSeeker::window(std::span<const double> center) const {
  const auto& k = simd::kernels();
  const double* planes[simd::kMaxDims];
  for (int d = 0; d < dims(); ++d) planes[d] = coords_[d].data();
  simd::WindowSums acc;
  const int g = static_cast<int>(grid_dims_.size());
  int offset[3] = {-1, -1, -1};
  int total = 1;
  for (int i = 0; i < g; ++i) total *= 3;
  for (int code = 0; code < total; ++code) {
    int c = code;
    for (int i = 0; i < g; ++i) {
      offset[i] = c % 3 - 1;
      c /= 3;
    }
    const auto it = cells_.find(cell_key(center, offset));
    if (it == cells_.end()) continue;
    k.window_accumulate(planes, dims(), weights_.data(), it->second.first, it->second.second,
                        center.data(), radius_ * radius_, acc);
  }
  return acc;
}

std::vector<double> ModeSeeker::seek(std::span<const double> start, int max_iterations, double tol,
                                     std::vector<std::vector<double>>* path, int* iterations) const {
  std::vector<double> y(start.begin(), start.end());
  std::vector<double> next(y.size());
  if (path) path->push_back(y);
  if (iterations) *iterations = 0;
  for (int it = 0; it < max_iterations; ++it) {
    const simd::WindowSums s = window(y);
    if (!(s.weight > 0.0)) break;
    if (iterations) ++*iterations;
    for (int d = 0; d < dims(); ++d) next[d] = s.sum[d] / s.weight;
    const double shift = std::sqrt(dist2(next, y));
    y.swap(next);
    if (path) path->push_back(y);
    if (shift < tol) break;
  }
  return y;
}

std::vector<double> ModeSeeker::sample(std::size_t i) const {
  std::vector<double> p(coords_.size());
  const std::size_t s = where_[i];
  for (std::size_t d = 0; d < coords_.size(); ++d) p[d] = coords_[d][s];
  return p;
}

std::vector<std::vector<double>> pixel_features(const LabImage& img, const MeanShiftConfig& cfg) {
  std::vector<std::vector<double>> f;
  const bool joint = cfg.spatial_radius > 0.0;
  const double rs = joint ? 1.0 / cfg.bandwidth : 1.0;
  auto scaled = [rs](const std::vector<double>& v) {
    std::vector<double> out(v);
    if (rs != 1.0) for (double& x : out) x *= rs;
    return out;
  };
  if (cfg.use_L) f.push_back(scaled(img.L));
  f.push_back(scaled(img.a));
  f.push_back(scaled(img.b));
  if (joint) {
    const std::size_t n = img.pixel_count();
    std::vector<double> col(n), row(n);
    for (std::size_t i = 0; i < n; ++i) {
      col[i] = static_cast<double>(i % img.width) / cfg.spatial_radius;
      row[i] = static_cast<double>(i / img.width) / cfg.spatial_radius;
    }
    f.push_back(std::move(col));
    f.push_back(std::move(row));
  }
  return f;
}

ModeSeekResult mean_shift_modes(const LabImage& img, const MeanShiftConfig& cfg) {
  cfg.validate();
  const bool joint = cfg.spatial_radius > 0.0;
  const auto features = pixel_features(img, cfg);
  const int dims = static_cast<int>(features.size());
  const std::size_t n = img.pixel_count();
  // In joint mode every coordinate is already scaled to a unit window.
  const double radius = joint ? 1.0 : cfg.bandwidth;
  const double merge = joint ? cfg.merge_distance() / cfg.bandwidth : cfg.merge_distance();
  const double tol = cfg.convergence_tol * radius;

  // Colour-only clustering runs once per distinct feature vector, weighted
  // by its pixel count; the joint domain has one sample per pixel.
  std::vector<std::size_t> pixel_sample(n);
  std::vector<std::vector<double>> coords(dims);
  std::vector<double> weights;
  if (joint) {
    coords = features;
    weights.assign(n, 1.0);
    std::iota(pixel_sample.begin(), pixel_sample.end(), std::size_t{0});
  } else {
    std::unordered_map<std::vector<std::uint64_t>, std::size_t, VecHash> seen;
    std::vector<std::uint64_t> key(dims);
    for (std::size_t i = 0; i < n; ++i) {
      for (int d = 0; d < dims; ++d) std::memcpy(&key[d], &features[d][i], sizeof(double));
      auto [it, inserted] = seen.try_emplace(key, weights.size());
      if (inserted) {
        for (int d = 0; d < dims; ++d) coords[d].push_back(features[d][i]);
        weights.push_back(0.0);
      }
      weights[it->second] += 1.0;
      pixel_sample[i] = it->second;
    }
  }
  const std::size_t m = weights.size();

  std::vector<int> grid_dims;
  if (joint) {
    grid_dims = {dims - 2, dims - 1};
  } else {
    for (int d = 0; d < dims; ++d) grid_dims.push_back(d);
  }
  const ModeSeeker seeker(coords, weights, radius, grid_dims);

  // Merge converged modes on a grid with cell size equal to the merge distance.
  ModeSeekResult res;
  res.dims = dims;
  std::vector<std::uint32_t> sample_cluster(m);
  std::unordered_map<std::vector<std::uint64_t>, std::vector<std::uint32_t>, VecHash> buckets;
  auto bucket_of = [&](const std::vector<double>& p, const std::vector<int>& off) {
    std::vector<std::uint64_t> k(p.size());
    for (std::size_t d = 0; d < p.size(); ++d) {
      k[d] = static_cast<std::uint64_t>(static_cast<std::int64_t>(std::floor(p[d] / merge)) + off[d]);
    }
    return k;
  };
  std::vector<int> off(dims, 0);
  int total = 1;
  for (int d = 0; d < dims; ++d) total *= 3;

  std::vector<double> start(dims);
  for (std::size_t i = 0; i < m; ++i) {
    for (int d = 0; d < dims; ++d) start[d] = coords[d][i];
    int iterations = 0;
    const std::vector<double> mode = seeker.seek(start, cfg.max_iterations, tol, nullptr, &iterations);
    res.longest_path = std::max(res.longest_path, iterations);
    std::uint32_t found = UINT32_MAX;
    double best = merge * merge;
    for (int code = 0; code < total; ++code) {
      int c = code;
      for (int d = 0; d < dims; ++d) {
        off[d] = c % 3 - 1;
        c /= 3;
      }
      const auto it = buckets.find(bucket_of(mode, off));
      if (it == buckets.end()) continue;
      for (std::uint32_t cl : it->second) {
        const double d2 = dist2(res.modes[cl], mode);
        if (d2 < best || (d2 == best && cl < found)) {
          best = d2;
          found = cl;
        }
      }
    }
    if (found == UINT32_MAX) {
      found = static_cast<std::uint32_t>(res.modes.size());
      res.modes.push_back(mode);
      std::fill(off.begin(), off.end(), 0);
      buckets[bucket_of(mode, off)].push_back(found);
    }
    sample_cluster[i] = found;
  }
  res.pixel_cluster.resize(n);
  for (std::size_t i = 0; i < n; ++i) res.pixel_cluster[i] = sample_cluster[pixel_sample[i]];

  if (joint) {
    for (auto& mode : res.modes) {
      for (int d = 0; d < dims - 2; ++d) mode[d] *= cfg.bandwidth;
      mode[dims - 2] *= cfg.spatial_radius;
      mode[dims - 1] *= cfg.spatial_radius;
    }
  }
  spdlog::debug("mean shift: {} samples, {} modes", m, res.modes.size());
  return res;
}

LabeledMask mean_shift_segment(const LabImage& img, const MeanShiftConfig& cfg) {
  const ModeSeekResult modes = mean_shift_modes(img, cfg);
  Raster<std::uint32_t> values(img.width, img.height, 1, img.geo, 0u);
  auto v = values.data();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = modes.pixel_cluster[i] + 1;
  return label_components(values);
}

}  // namespace georeg::image
