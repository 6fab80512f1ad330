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

#include "georeg/image/pansharpen.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "georeg/simd/kernels.hpp"

namespace georeg::image {
namespace {

struct Extent {
  double x0, x1, y0, y1;
};

Extent extent_of(const GeoTransform& g, int w, int h) {
  const double half = 0.5 * g.resolution;
  return {g.origin_x - half, g.origin_x + (w - 0.5) * g.resolution,
          g.origin_y - (h - 0.5) * g.resolution, g.origin_y + half};
}

}  // namespace

Raster<float> resample_bilinear(const ImageU8& src, const GeoTransform& geo, int width, int height) {
  Raster<float> out(width, height, src.bands(), geo, 0.0f);
  const int sw = src.width(), sh = src.height();
  for (int row = 0; row < height; ++row) {
    for (int col = 0; col < width; ++col) {
      const Vec2 w = geo.world(col, row);
      const Vec2 s = src.geo().pixel(w.x(), w.y());
      const double cx = std::clamp(s.x(), 0.0, double(sw - 1));
      const double cy = std::clamp(s.y(), 0.0, double(sh - 1));
      const int c0 = std::min(static_cast<int>(cx), sw - 1);
      const int r0 = std::min(static_cast<int>(cy), sh - 1);
      const int c1 = std::min(c0 + 1, sw - 1);
      const int r1 = std::min(r0 + 1, sh - 1);
      const double fx = cx - c0, fy = cy - r0;
      for (int b = 0; b < src.bands(); ++b) {
        const double top = (1 - fx) * src.at(c0, r0, b) + fx * src.at(c1, r0, b);
        const double bot = (1 - fx) * src.at(c0, r1, b) + fx * src.at(c1, r1, b);
        out.at(col, row, b) = static_cast<float>((1 - fy) * top + fy * bot);
      }
    }
  }
  return out;
}

Raster<float> pansharpen(const ImageU8& pan, const ImageU8& ms) {
  if (pan.bands() != 1) throw Error(ErrorCode::kInvalidArgument, "panchromatic image must have one band");
  if (ms.bands() < 3) throw Error(ErrorCode::kNotThreeBands, "multispectral image needs at least three bands");
  const double ratio = ms.geo().resolution / pan.geo().resolution;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-6 * rounded) {
    throw Error(ErrorCode::kResolutionMismatch, "multispectral/panchromatic resolution ratio is not an integer");
  }
  const Extent ep = extent_of(pan.geo(), pan.width(), pan.height());
  const Extent em = extent_of(ms.geo(), ms.width(), ms.height());
  if (ep.x1 <= em.x0 || em.x1 <= ep.x0 || ep.y1 <= em.y0 || em.y1 <= ep.y0) {
    throw Error(ErrorCode::kNoOverlap, "panchromatic and multispectral footprints do not overlap");
  }

  const Raster<float> up = resample_bilinear(ms, pan.geo(), pan.width(), pan.height());
  const std::size_t n = pan.pixel_count();
  const int nb = ms.bands();
  std::vector<std::vector<float>> planes(nb, std::vector<float>(n));
  const auto upd = up.data();
  for (std::size_t i = 0; i < n; ++i) {
    for (int b = 0; b < nb; ++b) planes[b][i] = upd[i * nb + b];
  }
  std::vector<float> panf(n);
  const auto pd = pan.data();
  for (std::size_t i = 0; i < n; ++i) panf[i] = pd[i];

  std::vector<std::vector<float>> fused(3, std::vector<float>(n));
  std::vector<const float*> in_ptrs(nb);
  for (int b = 0; b < nb; ++b) in_ptrs[b] = planes[b].data();
  float* out_ptrs[3] = {fused[0].data(), fused[1].data(), fused[2].data()};
  simd::kernels().brovey(panf.data(), in_ptrs.data(), nb, out_ptrs, 3, n, 255.0f);

  Raster<float> out(pan.width(), pan.height(), 3, pan.geo(), 0.0f);
  auto od = out.data();
  for (std::size_t i = 0; i < n; ++i) {
    for (int b = 0; b < 3; ++b) od[i * 3 + b] = fused[b][i];
  }
  return out;
}

ImageU8 to_u8(const Raster<float>& image) {
  ImageU8 out(image.width(), image.height(), image.bands(), image.geo(), 0);
  const auto src = image.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = static_cast<std::uint8_t>(std::clamp(std::lround(src[i]), 0L, 255L));
  }
  return out;
}

}  // namespace georeg::image
