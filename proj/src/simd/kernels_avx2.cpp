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

// Compiled with -mavx2 only; never reached unless the CPU reports AVX2.

#include <immintrin.h>

#include <algorithm>
#include <limits>

#include "georeg/simd/kernels.hpp"

namespace georeg::simd {
namespace {

void min_u8(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_min_epu8(va, vb));
  }
  for (; i < n; ++i) dst[i] = std::min(a[i], b[i]);
}

void max_u8(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_max_epu8(va, vb));
  }
  for (; i < n; ++i) dst[i] = std::max(a[i], b[i]);
}

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void window_accumulate(const double* const* dims, int ndims, const double* weights,
                       std::size_t begin, std::size_t end, const double* center,
                       double radius_sq, WindowSums& acc) {
  __m256d c[kMaxDims];
  __m256d s[kMaxDims];
  for (int d = 0; d < ndims; ++d) {
    c[d] = _mm256_set1_pd(center[d]);
    s[d] = _mm256_setzero_pd();
  }
  const __m256d r2 = _mm256_set1_pd(radius_sq);
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d sw = _mm256_setzero_pd();

  std::size_t i = begin;
  for (; i + 4 <= end; i += 4) {
    __m256d d2 = _mm256_setzero_pd();
    for (int d = 0; d < ndims; ++d) {
      const __m256d t = _mm256_sub_pd(_mm256_loadu_pd(dims[d] + i), c[d]);
      d2 = _mm256_add_pd(d2, _mm256_mul_pd(t, t));
    }
    const __m256d inside = _mm256_cmp_pd(d2, r2, _CMP_LE_OQ);
    if (_mm256_movemask_pd(inside) == 0) continue;
    const __m256d w = _mm256_and_pd(inside, weights ? _mm256_loadu_pd(weights + i) : one);
    sw = _mm256_add_pd(sw, w);
    for (int d = 0; d < ndims; ++d) {
      s[d] = _mm256_add_pd(s[d], _mm256_mul_pd(w, _mm256_loadu_pd(dims[d] + i)));
    }
  }
  acc.weight += hsum(sw);
  for (int d = 0; d < ndims; ++d) acc.sum[d] += hsum(s[d]);

  for (; i < end; ++i) {
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
  const float inv_bands_s = 1.0f / static_cast<float>(ms_bands);
  const __m256 inv_bands = _mm256_set1_ps(inv_bands_s);
  const __m256 zero = _mm256_setzero_ps();
  const __m256 vmax = _mm256_set1_ps(max_value);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 sum = zero;
    for (int b = 0; b < ms_bands; ++b) sum = _mm256_add_ps(sum, _mm256_loadu_ps(ms[b] + i));
    const __m256 intensity = _mm256_mul_ps(sum, inv_bands);
    const __m256 positive = _mm256_cmp_ps(intensity, zero, _CMP_GT_OQ);
    const __m256 ratio = _mm256_and_ps(positive, _mm256_div_ps(_mm256_loadu_ps(pan + i), intensity));
    for (int b = 0; b < out_bands; ++b) {
      const __m256 v = _mm256_mul_ps(_mm256_loadu_ps(ms[b] + i), ratio);
      _mm256_storeu_ps(out[b] + i, _mm256_min_ps(_mm256_max_ps(v, zero), vmax));
    }
  }
  for (; i < n; ++i) {
    float sum = 0.0f;
    for (int b = 0; b < ms_bands; ++b) sum = sum + ms[b][i];
    const float intensity = sum * inv_bands_s;
    const float ratio = intensity > 0.0f ? pan[i] / intensity : 0.0f;
    for (int b = 0; b < out_bands; ++b) {
      out[b][i] = std::min(std::max(ms[b][i] * ratio, 0.0f), max_value);
    }
  }
}

void project_points(const double* p, const double* xyz, std::size_t n, double* uv) {
  __m256d m[12];
  for (int k = 0; k < 12; ++k) m[k] = _mm256_set1_pd(p[k]);
  const __m256i idx = _mm256_setr_epi64x(0, 3, 6, 9);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d nan = _mm256_set1_pd(std::numeric_limits<double>::quiet_NaN());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const double* base = xyz + 3 * i;
    const __m256d x = _mm256_i64gather_pd(base, idx, 8);
    const __m256d y = _mm256_i64gather_pd(base + 1, idx, 8);
    const __m256d z = _mm256_i64gather_pd(base + 2, idx, 8);
    auto row = [&](int r) {
      return _mm256_add_pd(
          _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(m[4 * r], x), _mm256_mul_pd(m[4 * r + 1], y)),
                        _mm256_mul_pd(m[4 * r + 2], z)),
          m[4 * r + 3]);
    };
    const __m256d u = row(0), v = row(1), w = row(2);
    const __m256d degenerate = _mm256_cmp_pd(w, zero, _CMP_EQ_OQ);
    const __m256d pu = _mm256_blendv_pd(_mm256_div_pd(u, w), nan, degenerate);
    const __m256d pv = _mm256_blendv_pd(_mm256_div_pd(v, w), nan, degenerate);
    // interleave (u0 v0 u1 v1 | u2 v2 u3 v3)
    const __m256d lo = _mm256_unpacklo_pd(pu, pv);  // u0 v0 u2 v2
    const __m256d hi = _mm256_unpackhi_pd(pu, pv);  // u1 v1 u3 v3
    _mm256_storeu_pd(uv + 2 * i, _mm256_permute2f128_pd(lo, hi, 0x20));
    _mm256_storeu_pd(uv + 2 * i + 4, _mm256_permute2f128_pd(lo, hi, 0x31));
  }
  for (; i < n; ++i) {
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

constexpr KernelTable kTable{Isa::kAvx2, min_u8, max_u8, window_accumulate, brovey,
                             project_points};

}  // namespace

namespace detail {
const KernelTable& avx2_table() noexcept { return kTable; }
}  // namespace detail

}  // namespace georeg::simd
