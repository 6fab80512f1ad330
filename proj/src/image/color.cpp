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

#include "georeg/image/color.hpp"

#include <cmath>

namespace georeg::image {
namespace {

// D65 reference white.
constexpr double kXn = 0.95047;
constexpr double kYn = 1.0;
constexpr double kZn = 1.08883;

double srgb_to_linear(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
  constexpr double delta = 6.0 / 29.0;
  return t > delta * delta * delta ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

const std::array<double, 256>& linear_lut() {
  static const std::array<double, 256> lut = [] {
    std::array<double, 256> t{};
    for (int i = 0; i < 256; ++i) t[i] = srgb_to_linear(i / 255.0);
    return t;
  }();
  return lut;
}

}  // namespace

std::array<double, 3> srgb_to_lab(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) noexcept {
  const auto& lut = linear_lut();
  const double r = lut[r8], g = lut[g8], b = lut[b8];
  const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
  const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
  const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
  const double fx = lab_f(x / kXn), fy = lab_f(y / kYn), fz = lab_f(z / kZn);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

LabImage rgb_to_lab(const ImageU8& image, bool use_L) {
  if (image.bands() != 3) throw Error(ErrorCode::kNotThreeBands, "L*a*b* conversion needs an RGB image");
  LabImage lab;
  lab.width = image.width();
  lab.height = image.height();
  lab.geo = image.geo();
  lab.use_L = use_L;
  const std::size_t n = image.pixel_count();
  lab.L.resize(n);
  lab.a.resize(n);
  lab.b.resize(n);
  const auto px = image.data();
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = srgb_to_lab(px[3 * i], px[3 * i + 1], px[3 * i + 2]);
    lab.L[i] = v[0];
    lab.a[i] = v[1];
    lab.b[i] = v[2];
  }
  return lab;
}

}  // namespace georeg::image
