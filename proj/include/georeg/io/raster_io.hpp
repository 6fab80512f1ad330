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

#include <filesystem>
#include <optional>

#include "georeg/core/types.hpp"

namespace georeg::io {

// ESRI world file next to `raster_path` (same stem, ".wld").
std::filesystem::path world_file_path(const std::filesystem::path& raster_path);
void write_world_file(const std::filesystem::path& path, const GeoTransform& geo);
// Rotated world files are rejected with kParse.
GeoTransform read_world_file(const std::filesystem::path& path);

// 8-bit PNG with 1, 3 or 4 bands.
ImageU8 read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const ImageU8& image);

// Netpbm: reads P2/P3/P5/P6 with maxval <= 255; writes ASCII P2 (1 band) or
// P3 (3 bands).
ImageU8 read_pnm(const std::filesystem::path& path);
void write_pnm(const std::filesystem::path& path, const ImageU8& image);

// Reads by extension and attaches the sidecar georeference when present.
ImageU8 read_image(const std::filesystem::path& path);
// Writes by extension plus the sidecar world file.
void write_image(const std::filesystem::path& path, const ImageU8& image);

// 16-bit binary PGM (P5, maxval 65535, big-endian) plus world file.
void write_label_pgm(const std::filesystem::path& path, const LabeledMask& mask);
LabeledMask read_label_pgm(const std::filesystem::path& path);

}  // namespace georeg::io
