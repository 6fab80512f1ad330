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

#include "georeg/core/regions.hpp"

namespace georeg {

LabeledMask label_components(const Raster<std::uint32_t>& values) {
  const int w = values.width();
  const int h = values.height();
  LabeledMask out{Raster<std::uint32_t>(w, h, 1, values.geo(), 0u), 0};
  std::vector<PixelIndex> stack;
  for (int row = 0; row < h; ++row) {
    for (int col = 0; col < w; ++col) {
      const std::uint32_t v = values.at(col, row);
      if (v == 0 || out.raster.at(col, row) != 0) continue;
      const std::uint32_t label = ++out.count;
      out.raster.at(col, row) = label;
      stack.push_back({col, row});
      while (!stack.empty()) {
        const PixelIndex p = stack.back();
        stack.pop_back();
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const int c = p.col + dc;
            const int r = p.row + dr;
            if (!values.contains(c, r) || values.at(c, r) != v || out.raster.at(c, r) != 0) {
              continue;
            }
            out.raster.at(c, r) = label;
            stack.push_back({c, r});
          }
        }
      }
    }
  }
  return out;
}

LabeledMask filter_labels(const LabeledMask& mask,
                          const std::function<bool(std::uint32_t)>& keep) {
  std::vector<std::uint32_t> remap(mask.count + 1, 0);
  std::uint32_t next = 0;
  for (std::uint32_t l = 1; l <= mask.count; ++l) {
    if (keep(l)) remap[l] = ++next;
  }
  LabeledMask out{mask.raster, next};
  for (std::uint32_t& v : out.raster.data()) v = remap[v];
  return out;
}

std::vector<std::size_t> label_areas(const LabeledMask& mask) {
  std::vector<std::size_t> areas(mask.count + 1, 0);
  for (std::uint32_t v : mask.raster.data()) ++areas[v];
  return areas;
}

std::vector<std::vector<PixelIndex>> label_pixels(const LabeledMask& mask) {
  std::vector<std::vector<PixelIndex>> out(mask.count);
  for (int row = 0; row < mask.raster.height(); ++row) {
    for (int col = 0; col < mask.raster.width(); ++col) {
      const std::uint32_t v = mask.raster.at(col, row);
      if (v != 0) out[v - 1].push_back({col, row});
    }
  }
  return out;
}

}  // namespace georeg
