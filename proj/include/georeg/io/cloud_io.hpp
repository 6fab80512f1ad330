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

#include "georeg/core/types.hpp"

namespace georeg::io {

// Class codes on disk: 2 = ground, 0 or 1 = unclassified, anything else is
// non-ground. Writers emit 2, 1 and 6 respectively.
std::uint8_t class_to_code(PointClass c) noexcept;
PointClass class_from_code(int code) noexcept;

// ASCII "x y z [class] [intensity]" per line, '#' starts a comment.
PointCloud read_cloud_ascii(const std::filesystem::path& path);
void write_cloud_ascii(const std::filesystem::path& path, const PointCloud& cloud);

// PLY with a leading "vertex" element holding x, y, z and optional
// class/intensity scalars. Reads ascii and binary_little_endian; writes
// binary_little_endian with double coordinates.
PointCloud read_cloud_ply(const std::filesystem::path& path);
void write_cloud_ply(const std::filesystem::path& path, const PointCloud& cloud);

// Chooses the format from the extension (.ply, anything else is ASCII).
PointCloud read_cloud(const std::filesystem::path& path);
void write_cloud(const std::filesystem::path& path, const PointCloud& cloud);

}  // namespace georeg::io
