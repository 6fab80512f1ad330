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

#include "georeg/io/cloud_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace georeg::io {
namespace {

static_assert(std::endian::native == std::endian::little, "binary PLY I/O assumes a little-endian host");

[[noreturn]] void parse_error(const std::filesystem::path& path, std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::kParse, path.string() + ":" + std::to_string(line) + ": " + msg);
}

std::string to_shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

bool parse_double(std::string_view tok, double& out) {
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return res.ec == std::errc() && res.ptr == tok.data() + tok.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> toks;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) toks.push_back(line.substr(start, i - start));
  }
  return toks;
}

enum class PlyType { kInt8, kUint8, kInt16, kUint16, kInt32, kUint32, kFloat32, kFloat64 };

std::size_t ply_size(PlyType t) {
  switch (t) {
    case PlyType::kInt8:
    case PlyType::kUint8: return 1;
    case PlyType::kInt16:
    case PlyType::kUint16: return 2;
    case PlyType::kInt32:
    case PlyType::kUint32:
    case PlyType::kFloat32: return 4;
    case PlyType::kFloat64: return 8;
  }
  return 0;
}

bool ply_type(std::string_view name, PlyType& out) {
  static const std::pair<std::string_view, PlyType> kNames[] = {
      {"char", PlyType::kInt8},     {"int8", PlyType::kInt8},       {"uchar", PlyType::kUint8},
      {"uint8", PlyType::kUint8},   {"short", PlyType::kInt16},     {"int16", PlyType::kInt16},
      {"ushort", PlyType::kUint16}, {"uint16", PlyType::kUint16},   {"int", PlyType::kInt32},
      {"int32", PlyType::kInt32},   {"uint", PlyType::kUint32},     {"uint32", PlyType::kUint32},
      {"float", PlyType::kFloat32}, {"float32", PlyType::kFloat32}, {"double", PlyType::kFloat64},
      {"float64", PlyType::kFloat64}};
  for (const auto& [n, t] : kNames) {
    if (n == name) {
      out = t;
      return true;
    }
  }
  return false;
}

double read_ply_value(const char* p, PlyType t) {
  switch (t) {
    case PlyType::kInt8: { std::int8_t v; std::memcpy(&v, p, 1); return v; }
    case PlyType::kUint8: { std::uint8_t v; std::memcpy(&v, p, 1); return v; }
    case PlyType::kInt16: { std::int16_t v; std::memcpy(&v, p, 2); return v; }
    case PlyType::kUint16: { std::uint16_t v; std::memcpy(&v, p, 2); return v; }
    case PlyType::kInt32: { std::int32_t v; std::memcpy(&v, p, 4); return v; }
    case PlyType::kUint32: { std::uint32_t v; std::memcpy(&v, p, 4); return v; }
    case PlyType::kFloat32: { float v; std::memcpy(&v, p, 4); return v; }
    case PlyType::kFloat64: { double v; std::memcpy(&v, p, 8); return v; }
  }
  return 0.0;
}

struct PlyProperty {
  std::string name;
  PlyType type;
};

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<PlyProperty> properties;
  std::size_t stride() const {
    std::size_t s = 0;
    for (const auto& p : properties) s += ply_size(p.type);
    return s;
  }
};

}  // namespace

std::uint8_t class_to_code(PointClass c) noexcept {
  switch (c) {
    case PointClass::kGround: return 2;
    case PointClass::kNonGround: return 6;
    case PointClass::kUnclassified: return 1;
  }
  return 1;
}

PointClass class_from_code(int code) noexcept {
  if (code == 2) return PointClass::kGround;
  if (code == 0 || code == 1) return PointClass::kUnclassified;
  return PointClass::kNonGround;
}

PointCloud read_cloud_ascii(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  PointCloud cloud;
  int columns = -1;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks.size() < 3 || toks.size() > 5) parse_error(path, lineno, "expected 3 to 5 columns");
    if (columns < 0) columns = static_cast<int>(toks.size());
    if (static_cast<int>(toks.size()) != columns) parse_error(path, lineno, "inconsistent column count");
    double v[5];
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (!parse_double(toks[i], v[i])) parse_error(path, lineno, "bad number '" + std::string(toks[i]) + "'");
    }
    cloud.points.emplace_back(v[0], v[1], v[2]);
    if (columns >= 4) cloud.classes.push_back(class_from_code(static_cast<int>(v[3])));
    if (columns == 5) {
      if (v[4] < 0 || v[4] > 255) parse_error(path, lineno, "intensity outside 0..255");
      cloud.intensity.push_back(static_cast<std::uint8_t>(v[4]));
    }
  }
  cloud.validate();
  return cloud;
}

void write_cloud_ascii(const std::filesystem::path& path, const PointCloud& cloud) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << "# x y z";
  if (cloud.has_classes()) out << " class";
  if (cloud.has_intensity()) {
    if (!cloud.has_classes()) throw Error(ErrorCode::kInvalidArgument, "ASCII clouds need a class column before intensity");
    out << " intensity";
  }
  out << '\n';
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Point3& p = cloud.points[i];
    out << to_shortest(p.x()) << ' ' << to_shortest(p.y()) << ' ' << to_shortest(p.z());
    if (cloud.has_classes()) out << ' ' << int(class_to_code(cloud.classes[i]));
    if (cloud.has_intensity()) out << ' ' << int(cloud.intensity[i]);
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

PointCloud read_cloud_ply(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());

  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&]() {
    if (!std::getline(in, line)) parse_error(path, lineno, "truncated PLY header");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
  };
  next_line();
  if (line != "ply") parse_error(path, lineno, "missing 'ply' magic");

  bool binary = false;
  std::vector<PlyElement> elements;
  for (;;) {
    next_line();
    const auto toks = split_ws(line);
    if (toks.empty() || toks[0] == "comment" || toks[0] == "obj_info") continue;
    if (toks[0] == "end_header") break;
    if (toks[0] == "format") {
      if (toks.size() < 2) parse_error(path, lineno, "bad format line");
      if (toks[1] == "binary_little_endian") binary = true;
      else if (toks[1] == "ascii") binary = false;
      else parse_error(path, lineno, "unsupported PLY format " + std::string(toks[1]));
    } else if (toks[0] == "element") {
      if (toks.size() != 3) parse_error(path, lineno, "bad element line");
      PlyElement e;
      e.name = std::string(toks[1]);
      double count = 0;
      if (!parse_double(toks[2], count) || count < 0) parse_error(path, lineno, "bad element count");
      e.count = static_cast<std::size_t>(count);
      elements.push_back(std::move(e));
    } else if (toks[0] == "property") {
      if (elements.empty()) parse_error(path, lineno, "property before element");
      if (toks.size() != 3) parse_error(path, lineno, "list properties are not supported");
      PlyType t;
      if (!ply_type(toks[1], t)) parse_error(path, lineno, "unknown property type");
      elements.back().properties.push_back({std::string(toks[2]), t});
    } else {
      parse_error(path, lineno, "unexpected header line");
    }
  }
  if (elements.empty() || elements.front().name != "vertex") {
    parse_error(path, lineno, "the first element must be 'vertex'");
  }
  const PlyElement& vertex = elements.front();
  int ix = -1, iy = -1, iz = -1, icls = -1, iint = -1;
  for (std::size_t i = 0; i < vertex.properties.size(); ++i) {
    const std::string& n = vertex.properties[i].name;
    if (n == "x") ix = int(i);
    else if (n == "y") iy = int(i);
    else if (n == "z") iz = int(i);
    else if (n == "class" || n == "classification" || n == "scalar_class") icls = int(i);
    else if (n == "intensity" || n == "scalar_intensity") iint = int(i);
  }
  if (ix < 0 || iy < 0 || iz < 0) parse_error(path, lineno, "vertex lacks x/y/z");

  PointCloud cloud;
  cloud.points.reserve(vertex.count);
  std::vector<double> vals(vertex.properties.size());
  std::vector<char> record(vertex.stride());
  for (std::size_t n = 0; n < vertex.count; ++n) {
    if (binary) {
      if (!in.read(record.data(), static_cast<std::streamsize>(record.size()))) {
        throw Error(ErrorCode::kParse, path.string() + ": truncated vertex data");
      }
      std::size_t off = 0;
      for (std::size_t i = 0; i < vals.size(); ++i) {
        vals[i] = read_ply_value(record.data() + off, vertex.properties[i].type);
        off += ply_size(vertex.properties[i].type);
      }
    } else {
      next_line();
      const auto toks = split_ws(line);
      if (toks.size() != vals.size()) parse_error(path, lineno, "wrong vertex field count");
      for (std::size_t i = 0; i < vals.size(); ++i) {
        if (!parse_double(toks[i], vals[i])) parse_error(path, lineno, "bad number");
      }
    }
    cloud.points.emplace_back(vals[ix], vals[iy], vals[iz]);
    if (icls >= 0) cloud.classes.push_back(class_from_code(static_cast<int>(vals[icls])));
    if (iint >= 0) cloud.intensity.push_back(static_cast<std::uint8_t>(std::clamp(vals[iint], 0.0, 255.0)));
  }
  cloud.validate();
  return cloud;
}

void write_cloud_ply(const std::filesystem::path& path, const PointCloud& cloud) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << "ply\nformat binary_little_endian 1.0\n";
  out << "element vertex " << cloud.size() << '\n';
  out << "property double x\nproperty double y\nproperty double z\n";
  if (cloud.has_classes()) out << "property uchar class\n";
  if (cloud.has_intensity()) out << "property uchar intensity\n";
  out << "end_header\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Point3& p = cloud.points[i];
    const double xyz[3] = {p.x(), p.y(), p.z()};
    out.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
    if (cloud.has_classes()) {
      const char c = static_cast<char>(class_to_code(cloud.classes[i]));
      out.write(&c, 1);
    }
    if (cloud.has_intensity()) {
      const char c = static_cast<char>(cloud.intensity[i]);
      out.write(&c, 1);
    }
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

PointCloud read_cloud(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::kIo, "no such file " + path.string());
  return path.extension() == ".ply" ? read_cloud_ply(path) : read_cloud_ascii(path);
}

void write_cloud(const std::filesystem::path& path, const PointCloud& cloud) {
  if (path.extension() == ".ply") write_cloud_ply(path, cloud);
  else write_cloud_ascii(path, cloud);
}

}  // namespace georeg::io
