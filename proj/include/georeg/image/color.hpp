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

#include <array>
#include <vector>

#include "georeg/core/types.hpp"

namespace georeg::image {

// CIE L*a*b* image stored as separate planes.
struct LabImage {
  int width = 0;
  int height = 0;
  GeoTransform geo;
  std::vector<double> L;
  std::vector<double> a;
  std::vector<double> b;
  // Whether L* takes part in clustering, (a*, b*) only otherwise.
  bool use_L = true;

  std::size_t pixel_count() const noexcept { return L.size(); }
};

// sRGB (8-bit, D65) to CIE L*a*b*.
std::array<double, 3> srgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept;

// Throws kNotThreeBands unless the image has exactly three bands.
LabImage rgb_to_lab(const ImageU8& image, bool use_L = true);

}  // namespace georeg::image
