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

#include <algorithm>
#include <cmath>
#include <limits>

#include "georeg/simd/kernels.hpp"

namespace georeg::simd {
namespace {

void min_u8(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = std::min(a[i], b[i]);
}

void max_u8(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = std::max(a[i], b[i]);
}

void window_accumulate(const double* const* dims, int ndims, const double* weights,
                       std::size_t begin, std::size_t end, const double* center,
                       double radius_sq, WindowSums& acc) {
  for (std::size_t i = begin; i < end; ++i) {
    double d2 = 0.0;
    for (int d = 0; d < ndims; ++d) {
      const double t = dims[d][i] - center[d];
      d2 += t * t;
    }
    if (d2 > radius_sq) continue;
    const double w = weights ? weights[i] : 1.0;
    acc.weight += w;
    for (int d = 0; d < ndims; ++d) acc.sum[d] += w * dims[d][i];
  }
}

void brovey(const float* pan, const float* const* ms, int ms_bands, float* const* out,
            int out_bands, std::size_t n, float max_value) {
  const float inv_bands = 1.0f / static_cast<float>(ms_bands);
  for (std::size_t i = 0; i < n; ++i) {
    float sum = 0.0f;
    for (int b = 0; b < ms_bands; ++b) sum = sum + ms[b][i];
    const float intensity = sum * inv_bands;
    const float ratio = intensity > 0.0f ? pan[i] / intensity : 0.0f;
    for (int b = 0; b < out_bands; ++b) {
      out[b][i] = std::min(std::max(ms[b][i] * ratio, 0.0f), max_value);
    }
  }
}

void project_points(const double* p, const double* xyz, std::size_t n, double* uv) {
  for (std::size_t i = 0; i < n; ++i) {
    const double x = xyz[3 * i], y = xyz[3 * i + 1], z = xyz[3 * i + 2];
    const double u = ((p[0] * x + p[1] * y) + p[2] * z) + p[3];
    const double v = ((p[4] * x + p[5] * y) + p[6] * z) + p[7];
    const double w = ((p[8] * x + p[9] * y) + p[10] * z) + p[11];
    if (w == 0.0) {
      uv[2 * i] = uv[2 * i + 1] = std::numeric_limits<double>::quiet_NaN();
    } else {
      uv[2 * i] = u / w;
      uv[2 * i + 1] = v / w;
    }
  }
}

constexpr KernelTable kTable{Isa::kScalar, min_u8, max_u8, window_accumulate, brovey,
                             project_points};

}  // namespace

namespace detail {
const KernelTable& scalar_table() noexcept { return kTable; }
}  // namespace detail

}  // namespace georeg::simd
