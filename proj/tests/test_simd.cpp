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

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "georeg/simd/kernels.hpp"

using namespace georeg::simd;

namespace {

// Every compiled-in table other than scalar that the CPU supports.
std::vector<const KernelTable*> vector_tables() {
  std::vector<const KernelTable*> out;
  if (const KernelTable* t = kernels_for(Isa::kAvx2)) out.push_back(t);
  return out;
}

}  // namespace

TEST_CASE("dispatch returns a usable table") {
  const KernelTable& k = kernels();
  CHECK(k.min_u8 != nullptr);
  CHECK(kernels_for(Isa::kScalar) == &detail::scalar_table());
  MESSAGE("active ISA: " << isa_name(k.isa) << ", detected: " << isa_name(detect_isa()));
}

TEST_CASE("scalar min/max reference") {
  const auto& s = detail::scalar_table();
  const std::uint8_t a[] = {0, 5, 255, 7}, b[] = {1, 5, 0, 9};
  std::uint8_t out[4];
  s.min_u8(out, a, b, 4);
  CHECK(out[0] == 0);
  CHECK(out[2] == 0);
  CHECK(out[3] == 7);
  s.max_u8(out, a, b, 4);
  CHECK(out[0] == 1);
  CHECK(out[2] == 255);
}

TEST_CASE("u8 min/max kernels are bit-identical to scalar, including tails and aliasing") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> byte(0, 255);
  for (const KernelTable* t : vector_tables()) {
    for (std::size_t n : {0, 1, 15, 31, 32, 33, 64, 100, 1000}) {
      std::vector<std::uint8_t> a(n), b(n), r1(n), r2(n);
      for (auto& x : a) x = static_cast<std::uint8_t>(byte(rng));
      for (auto& x : b) x = static_cast<std::uint8_t>(byte(rng));
      detail::scalar_table().min_u8(r1.data(), a.data(), b.data(), n);
      t->min_u8(r2.data(), a.data(), b.data(), n);
      CHECK(r1 == r2);
      detail::scalar_table().max_u8(r1.data(), a.data(), b.data(), n);
      t->max_u8(r2.data(), a.data(), b.data(), n);
      CHECK(r1 == r2);
      std::vector<std::uint8_t> alias = a;
      t->min_u8(alias.data(), alias.data(), b.data(), n);
      detail::scalar_table().min_u8(r1.data(), a.data(), b.data(), n);
      CHECK(alias == r1);
    }
  }
}

TEST_CASE("window sums agree with scalar and with a direct loop") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 5.0);
  std::uniform_real_distribution<double> w(0.5, 3.0);
  for (int dims = 1; dims <= kMaxDims; ++dims) {
    const std::size_t n = 517;
    std::vector<std::vector<double>> planes(dims, std::vector<double>(n));
    std::vector<double> weights(n);
    for (auto& p : planes) {
      for (double& x : p) x = g(rng);
    }
    for (double& x : weights) x = w(rng);
    const double* ptrs[kMaxDims];
    for (int d = 0; d < dims; ++d) ptrs[d] = planes[d].data();
    double center[kMaxDims] = {1.0, -2.0, 0.5, 0.0, 1.0, 2.0};
    const double r2 = 49.0;

    WindowSums direct;
    for (std::size_t i = 3; i < n - 5; ++i) {
      double d2 = 0;
      for (int d = 0; d < dims; ++d) d2 += (planes[d][i] - center[d]) * (planes[d][i] - center[d]);
      if (d2 <= r2) {
        direct.weight += weights[i];
        for (int d = 0; d < dims; ++d) direct.sum[d] += weights[i] * planes[d][i];
      }
    }
    WindowSums s;
    detail::scalar_table().window_accumulate(ptrs, dims, weights.data(), 3, n - 5, center, r2, s);
    CHECK(s.weight == doctest::Approx(direct.weight).epsilon(1e-12));
    for (int d = 0; d < dims; ++d) CHECK(s.sum[d] == doctest::Approx(direct.sum[d]).epsilon(1e-12));

    WindowSums unit;
    detail::scalar_table().window_accumulate(ptrs, dims, nullptr, 0, n, center, r2, unit);
    CHECK(unit.weight == std::floor(unit.weight));

    for (const KernelTable* t : vector_tables()) {
      WindowSums v;
      t->window_accumulate(ptrs, dims, weights.data(), 3, n - 5, center, r2, v);
      CHECK(v.weight == doctest::Approx(s.weight).epsilon(1e-12));
      for (int d = 0; d < dims; ++d) CHECK(v.sum[d] == doctest::Approx(s.sum[d]).epsilon(1e-12));
      WindowSums vu;
      t->window_accumulate(ptrs, dims, nullptr, 0, n, center, r2, vu);
      CHECK(vu.weight == unit.weight);
    }
  }
}

TEST_CASE("brovey kernels are bit-identical") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<float> u(0.0f, 255.0f);
  for (const KernelTable* t : vector_tables()) {
    for (int bands : {3, 4}) {
      const std::size_t n = 1003;
      std::vector<float> pan(n);
      std::vector<std::vector<float>> ms(bands, std::vector<float>(n));
      for (float& x : pan) x = u(rng);
      for (auto& b : ms) {
        for (float& x : b) x = u(rng);
      }
      ms[0][5] = ms[1][5] = ms[2][5] = 0.0f;
      if (bands == 4) ms[3][5] = 0.0f;
      std::vector<std::vector<float>> o1(3, std::vector<float>(n)), o2 = o1;
      const float* msp[4];
      float* p1[3];
      float* p2[3];
      for (int b = 0; b < bands; ++b) msp[b] = ms[b].data();
      for (int b = 0; b < 3; ++b) {
        p1[b] = o1[b].data();
        p2[b] = o2[b].data();
      }
      detail::scalar_table().brovey(pan.data(), msp, bands, p1, 3, n, 255.0f);
      t->brovey(pan.data(), msp, bands, p2, 3, n, 255.0f);
      for (int b = 0; b < 3; ++b) CHECK(std::memcmp(o1[b].data(), o2[b].data(), n * sizeof(float)) == 0);
      CHECK(o1[0][5] == 0.0f);
    }
  }
}

TEST_CASE("point projection kernels are bit-identical") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1000.0, 1000.0);
  double p[12];
  for (double& x : p) x = u(rng);
  const std::size_t n = 777;
  std::vector<double> xyz(3 * n);
  for (double& x : xyz) x = u(rng);
  // A point on the principal plane.
  xyz[0] = 0;
  xyz[1] = 0;
  xyz[2] = -p[11] / p[10];
  p[8] = p[9] = 0;
  std::vector<double> uv1(2 * n), uv2(2 * n);
  detail::scalar_table().project_points(p, xyz.data(), n, uv1.data());
  for (std::size_t i = 1; i < n; ++i) {
    const double w = p[8] * xyz[3 * i] + p[9] * xyz[3 * i + 1] + p[10] * xyz[3 * i + 2] + p[11];
    const double uu = (p[0] * xyz[3 * i] + p[1] * xyz[3 * i + 1] + p[2] * xyz[3 * i + 2] + p[3]) / w;
    CHECK(uv1[2 * i] == doctest::Approx(uu).epsilon(1e-12));
  }
  for (const KernelTable* t : vector_tables()) {
    t->project_points(p, xyz.data(), n, uv2.data());
    for (std::size_t i = 0; i < 2 * n; ++i) {
      if (std::isnan(uv1[i])) {
        CHECK(std::isnan(uv2[i]));
      } else {
        CHECK(uv1[i] == uv2[i]);
      }
    }
  }
}
