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

#include "georeg/io/raster_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace georeg::io {
namespace {

std::string to_shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw Error(ErrorCode::kIo, std::string("cannot open ") + path.string());
  return f;
}

// Netpbm header tokens: whitespace separated, '#' comments to end of line.
class PnmReader {
 public:
  explicit PnmReader(std::istream& in) : in_(in) {}

  std::string token() {
    std::string tok;
    int c;
    while ((c = in_.get()) != EOF) {
      if (c == '#') {
        while ((c = in_.get()) != EOF && c != '\n') {}
        if (!tok.empty()) break;
        continue;
      }
      if (std::isspace(c)) {
        if (!tok.empty()) break;
        continue;
      }
      tok.push_back(static_cast<char>(c));
    }
    return tok;
  }

  long number() {
    const std::string t = token();
    long v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
      throw Error(ErrorCode::kParse, "bad netpbm number '" + t + "'");
    }
    return v;
  }

 private:
  std::istream& in_;
};

}  // namespace

std::filesystem::path world_file_path(const std::filesystem::path& raster_path) {
  std::filesystem::path p = raster_path;
  p.replace_extension(".wld");
  return p;
}

void write_world_file(const std::filesystem::path& path, const GeoTransform& geo) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << to_shortest(geo.resolution) << "\n0\n0\n" << to_shortest(-geo.resolution) << '\n'
      << to_shortest(geo.origin_x) << '\n' << to_shortest(geo.origin_y) << '\n';
}

GeoTransform read_world_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  double v[6];
  for (double& x : v) {
    if (!(in >> x)) throw Error(ErrorCode::kParse, path.string() + ": expected six numbers");
  }
  if (v[1] != 0.0 || v[2] != 0.0) throw Error(ErrorCode::kParse, path.string() + ": rotated world files are not supported");
  if (!(v[0] > 0.0) || v[3] != -v[0]) throw Error(ErrorCode::kParse, path.string() + ": pixels must be square and north-up");
  return GeoTransform{v[4], v[5], v[0]};
}

ImageU8 read_png(const std::filesystem::path& path) {
  FilePtr f = open_file(path, "rb");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::kIo, "libpng initialisation failed");
  }
  // Declared before setjmp so a longjmp never skips their destructors.
  ImageU8 img;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::kParse, "corrupt PNG " + path.string());
  }
  png_init_io(png, f.get());
  png_read_info(png, info);
  png_set_strip_16(png);
  png_set_packing(png);
  const png_byte color = png_get_color_type(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_strip_alpha(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_read_update_info(png, info);

  const int w = static_cast<int>(png_get_image_width(png, info));
  const int h = static_cast<int>(png_get_image_height(png, info));
  const int channels = png_get_channels(png, info);
  img = ImageU8(w, h, channels);
  rows.resize(h);
  for (int r = 0; r < h; ++r) rows[r] = &img.at(0, r);
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

void write_png(const std::filesystem::path& path, const ImageU8& image) {
  const int color = [&] {
    switch (image.bands()) {
      case 1: return PNG_COLOR_TYPE_GRAY;
      case 3: return PNG_COLOR_TYPE_RGB;
      case 4: return PNG_COLOR_TYPE_RGB_ALPHA;
      default: throw Error(ErrorCode::kInvalidArgument, "PNG needs 1, 3 or 4 bands");
    }
  }();
  FilePtr f = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::kIo, "libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::kIo, "PNG write failed for " + path.string());
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, image.width(), image.height(), 8, color, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int r = 0; r < image.height(); ++r) {
    png_write_row(png, const_cast<png_bytep>(&image.at(0, r)));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

ImageU8 read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  PnmReader rd(in);
  const std::string magic = rd.token();
  int bands = 0;
  bool ascii = false;
  if (magic == "P2") { bands = 1; ascii = true; }
  else if (magic == "P3") { bands = 3; ascii = true; }
  else if (magic == "P5") { bands = 1; }
  else if (magic == "P6") { bands = 3; }
  else throw Error(ErrorCode::kParse, path.string() + ": unsupported netpbm magic '" + magic + "'");
  const long w = rd.number(), h = rd.number(), maxval = rd.number();
  if (w < 1 || h < 1 || maxval < 1 || maxval > 255) {
    throw Error(ErrorCode::kParse, path.string() + ": only 8-bit netpbm images are supported here");
  }
  ImageU8 img(static_cast<int>(w), static_cast<int>(h), bands);
  auto data = img.data();
  if (ascii) {
    for (auto& v : data) {
      const long x = rd.number();
      if (x < 0 || x > maxval) throw Error(ErrorCode::kParse, path.string() + ": sample out of range");
      v = static_cast<std::uint8_t>(x * 255 / maxval);
    }
  } else {
    if (!in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()))) {
      throw Error(ErrorCode::kParse, path.string() + ": truncated raster data");
    }
    if (maxval != 255) {
      for (auto& v : data) v = static_cast<std::uint8_t>(std::min<long>(v, maxval) * 255 / maxval);
    }
  }
  return img;
}

void write_pnm(const std::filesystem::path& path, const ImageU8& image) {
  if (image.bands() != 1 && image.bands() != 3) {
    throw Error(ErrorCode::kInvalidArgument, "netpbm output needs 1 or 3 bands");
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << (image.bands() == 1 ? "P2" : "P3") << '\n'
      << image.width() << ' ' << image.height() << "\n255\n";
  const std::size_t per_row = static_cast<std::size_t>(image.width()) * image.bands();
  const auto data = image.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << int(data[i]) << ((i + 1) % per_row == 0 ? '\n' : ' ');
  }
}

ImageU8 read_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::kIo, "no such file " + path.string());
  const auto ext = path.extension();
  ImageU8 img = (ext == ".png") ? read_png(path) : read_pnm(path);
  const auto wld = world_file_path(path);
  if (std::filesystem::exists(wld)) img.set_geo(read_world_file(wld));
  return img;
}

void write_image(const std::filesystem::path& path, const ImageU8& image) {
  if (path.extension() == ".png") write_png(path, image);
  else write_pnm(path, image);
  write_world_file(world_file_path(path), image.geo());
}

void write_label_pgm(const std::filesystem::path& path, const LabeledMask& mask) {
  if (mask.count > 65535) throw Error(ErrorCode::kInvalidArgument, "more than 65535 labels do not fit a 16-bit PGM");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << "P5\n" << mask.raster.width() << ' ' << mask.raster.height() << "\n65535\n";
  std::vector<char> buf;
  buf.reserve(mask.raster.pixel_count() * 2);
  for (std::uint32_t v : mask.raster.data()) {
    buf.push_back(static_cast<char>((v >> 8) & 0xff));
    buf.push_back(static_cast<char>(v & 0xff));
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
  write_world_file(world_file_path(path), mask.raster.geo());
}

LabeledMask read_label_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  PnmReader rd(in);
  if (rd.token() != "P5") throw Error(ErrorCode::kParse, path.string() + ": expected a binary PGM");
  const long w = rd.number(), h = rd.number(), maxval = rd.number();
  if (w < 1 || h < 1 || maxval < 256 || maxval > 65535) {
    throw Error(ErrorCode::kParse, path.string() + ": expected a 16-bit PGM");
  }
  GeoTransform geo;
  const auto wld = world_file_path(path);
  if (std::filesystem::exists(wld)) geo = read_world_file(wld);
  LabeledMask mask{Raster<std::uint32_t>(static_cast<int>(w), static_cast<int>(h), 1, geo), 0};
  std::vector<unsigned char> buf(mask.raster.pixel_count() * 2);
  if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()))) {
    throw Error(ErrorCode::kParse, path.string() + ": truncated raster data");
  }
  auto data = mask.raster.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = (std::uint32_t(buf[2 * i]) << 8) | buf[2 * i + 1];
    mask.count = std::max(mask.count, data[i]);
  }
  return mask;
}

}  // namespace georeg::io
