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

// Data-parallel inner loops with a scalar reference implementation and
// vectorized variants chosen once at runtime. Every variant must agree with
// the scalar one: bit-exactly for the integer, Brovey and projection kernels,
// and up to summation order for window_accumulate.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace georeg::simd {

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa) noexcept;

inline constexpr int kMaxDims = 6;

struct WindowSums {
  double weight = 0.0;
  std::array<double, kMaxDims> sum{};
};

struct KernelTable {
  Isa isa;

  // dst[i] = min(a[i], b[i]); dst may alias a or b.
  void (*min_u8)(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
  void (*max_u8)(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t n);

  // Flat-kernel window sums over samples [begin, end) stored as `ndims`
  // separate coordinate arrays. A sample contributes when its squared
  // distance to `center` is <= radius_sq. `weights` may be null (unit).
  void (*window_accumulate)(const double* const* dims, int ndims, const double* weights,
                            std::size_t begin, std::size_t end, const double* center,
                            double radius_sq, WindowSums& acc);

  // Brovey fusion: intensity = mean of the `ms_bands` upsampled bands;
  // out[b][i] = clamp(ms[b][i] * pan[i] / intensity, 0, max_value), and 0
  // where the intensity is not positive.
  void (*brovey)(const float* pan, const float* const* ms, int ms_bands, float* const* out,
                 int out_bands, std::size_t n, float max_value);

  // Projects n interleaved xyz points through a row-major 3x4 matrix into
  // interleaved uv. Points with a zero homogeneous scale yield NaN.
  void (*project_points)(const double* p, const double* xyz, std::size_t n, double* uv);
};

Isa detect_isa() noexcept;

// Table for the detected ISA, overridable with GEOREG_SIMD=scalar|avx2.
const KernelTable& kernels();

// Null when `isa` is not compiled in or not supported by this CPU.
const KernelTable* kernels_for(Isa isa) noexcept;

namespace detail {
const KernelTable& scalar_table() noexcept;
#if defined(GEOREG_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif
}  // namespace detail

}  // namespace georeg::simd
