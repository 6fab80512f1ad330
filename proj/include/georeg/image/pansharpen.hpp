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

#include "georeg/core/types.hpp"

namespace georeg::image {

// Bilinear resampling of every band of `src` at the pixel centers of a grid
// with `geo` and the given size; samples clamp to the source edge.
Raster<float> resample_bilinear(const ImageU8& src, const GeoTransform& geo, int width, int height);

// Brovey fusion of a fine single-band panchromatic image with a coarse
// multispectral image (first three bands are R, G, B; all bands form the
// intensity). Output lives on the panchromatic grid, clipped to [0, 255].
//
// Throws kResolutionMismatch unless the resolution ratio is a positive
// integer, and kNoOverlap when the footprints are disjoint.
Raster<float> pansharpen(const ImageU8& pan, const ImageU8& ms);

// Rounds and clamps to 8 bits.
ImageU8 to_u8(const Raster<float>& image);

}  // namespace georeg::image
