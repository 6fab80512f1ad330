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

#include <cstdint>
#include <functional>
#include <vector>

#include "georeg/core/types.hpp"

namespace georeg {

// Labels 8-connected components of equal-valued pixels. Pixels whose value is
// zero stay background. Labels are 1..n in raster-scan order of the first
// pixel of each component.
LabeledMask label_components(const Raster<std::uint32_t>& values);

// Keeps labels for which `keep(label)` is true and renumbers survivors
// 1..m preserving their relative order.
LabeledMask filter_labels(const LabeledMask& mask,
                          const std::function<bool(std::uint32_t)>& keep);

// Pixel count per label; entry 0 is the background count.
std::vector<std::size_t> label_areas(const LabeledMask& mask);

// Pixels of each label in raster-scan order; entry i holds label i + 1.
std::vector<std::vector<PixelIndex>> label_pixels(const LabeledMask& mask);

}  // namespace georeg
