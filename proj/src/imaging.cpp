// Copyright (c) 2026 The finr Authors
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

#include "finr/imaging.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>

#include "finr/error.hpp"

namespace finr {
namespace {

constexpr std::array<unsigned char, 8> kPngSignature = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

unsigned char quantize(double v) {
  return static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageError(ImageErrorCode::io, "cannot open image " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct PngReadState {
  const std::vector<unsigned char>* bytes;
  std::size_t pos;
};

void png_read_from_memory(png_structp png, png_bytep out, png_size_t count) {
  auto* state = static_cast<PngReadState*>(png_get_io_ptr(png));
  if (state->pos + count > state->bytes->size()) png_error(png, "unexpected end of PNG data");
  std::copy_n(state->bytes->data() + state->pos, count, out);
  state->pos += count;
}

void png_error_handler(png_structp png, png_const_charp msg) {
  auto* what = static_cast<std::string*>(png_get_error_ptr(png));
  *what = msg;
  png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

ImageGrid decode_png(const std::vector<unsigned char>& bytes, const std::filesystem::path& path) {
  std::string error;
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &error, png_error_handler, png_warning_handler);
  if (!png) throw ImageError(ImageErrorCode::io, "libpng initialization failed");
  png_infop info = png_create_info_struct(png);
  PngReadState state{&bytes, 0};
  ImageGrid image;
  std::vector<unsigned char> pixels;
  std::vector<png_bytep> row_ptrs;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ImageError(ImageErrorCode::corrupt, "corrupt PNG " + path.string() + ": " + error);
  }
  png_set_read_fn(png, &state, png_read_from_memory);
  png_read_info(png, info);
  const auto color = png_get_color_type(png, info);
  const auto depth = png_get_bit_depth(png, info);
  if (depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const std::size_t w = png_get_image_width(png, info);
  const std::size_t h = png_get_image_height(png, info);
  const std::size_t c = png_get_channels(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  pixels.resize(stride * h);
  row_ptrs.resize(h);
  for (std::size_t r = 0; r < h; ++r) row_ptrs[r] = pixels.data() + r * stride;
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  if (c != 1 && c != 3) {
    throw ImageError(ImageErrorCode::unsupported_format,
                     "unsupported PNG channel layout in " + path.string());
  }
  image = ImageGrid(h, w, c);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t i = 0; i < w * c; ++i) {
      image.data[r * w * c + i] = pixels[r * stride + i] / 255.0;
    }
  }
  return image;
}

// Reads one whitespace-separated header integer, skipping '#' comments.
bool pnm_header_int(const std::vector<unsigned char>& bytes, std::size_t& pos, long& out) {
  while (pos < bytes.size()) {
    if (bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (std::isspace(bytes[pos])) {
      ++pos;
    } else {
      break;
    }
  }
  if (pos >= bytes.size() || !std::isdigit(bytes[pos])) return false;
  out = 0;
  while (pos < bytes.size() && std::isdigit(bytes[pos])) {
    out = out * 10 + (bytes[pos] - '0');
    if (out > (1L << 24)) return false;
    ++pos;
  }
  return true;
}

ImageGrid decode_pnm(const std::vector<unsigned char>& bytes, const std::filesystem::path& path) {
  const std::size_t channels = bytes[1] == '6' ? 3 : 1;
  std::size_t pos = 2;
  long w = 0, h = 0, maxval = 0;
  if (!pnm_header_int(bytes, pos, w) || !pnm_header_int(bytes, pos, h) ||
      !pnm_header_int(bytes, pos, maxval) || pos >= bytes.size() || w <= 0 || h <= 0) {
    throw ImageError(ImageErrorCode::corrupt, "corrupt netpbm header in " + path.string());
  }
  if (maxval != 255) {
    throw ImageError(ImageErrorCode::unsupported_format,
                     "only 8-bit netpbm (maxval 255) is supported: " + path.string());
  }
  ++pos;  // single whitespace after maxval
  const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * channels;
  if (bytes.size() - pos < count) {
    throw ImageError(ImageErrorCode::corrupt, "truncated netpbm data in " + path.string());
  }
  ImageGrid image(static_cast<std::size_t>(h), static_cast<std::size_t>(w), channels);
  for (std::size_t i = 0; i < count; ++i) image.data[i] = bytes[pos + i] / 255.0;
  return image;
}

void write_png(const ImageGrid& image, const std::filesystem::path& path) {
  std::unique_ptr<FILE, int (*)(FILE*)> file(std::fopen(path.string().c_str(), "wb"), std::fclose);
  if (!file) throw ImageError(ImageErrorCode::io, "cannot open " + path.string() + " for writing");
  std::string error;
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &error, png_error_handler, png_warning_handler);
  if (!png) throw ImageError(ImageErrorCode::io, "libpng initialization failed");
  png_infop info = png_create_info_struct(png);
  std::vector<unsigned char> pixels(image.data.size());
  std::transform(image.data.begin(), image.data.end(), pixels.begin(), quantize);
  std::vector<png_bytep> rows(image.height);
  const std::size_t stride = image.width * image.channels;
  for (std::size_t r = 0; r < image.height; ++r) rows[r] = pixels.data() + r * stride;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw ImageError(ImageErrorCode::io, "failed writing PNG " + path.string() + ": " + error);
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width),
               static_cast<png_uint_32>(image.height), 8,
               image.channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void write_pnm(const ImageGrid& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ImageError(ImageErrorCode::io, "cannot open " + path.string() + " for writing");
  out << (image.channels == 3 ? "P6" : "P5") << "\n"
      << image.width << " " << image.height << "\n255\n";
  for (double v : image.data) out.put(static_cast<char>(quantize(v)));
  if (!out) throw ImageError(ImageErrorCode::io, "failed writing " + path.string());
}

}  // namespace

ImageGrid ImageGrid::clamped() const {
  ImageGrid out = *this;
  for (double& v : out.data) v = std::clamp(v, 0.0, 1.0);
  return out;
}

ImageGrid load_image(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  if (bytes.size() >= kPngSignature.size() &&
      std::equal(kPngSignature.begin(), kPngSignature.end(), bytes.begin())) {
    return decode_png(bytes, path);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6')) {
    return decode_pnm(bytes, path);
  }
  throw ImageError(ImageErrorCode::unsupported_format,
                   "unrecognized image format: " + path.string());
}

void save_image(const ImageGrid& image, const std::filesystem::path& path) {
  if (image.channels != 1 && image.channels != 3) {
    throw ImageError(ImageErrorCode::unsupported_format, "only 1 or 3 channels can be saved");
  }
  if (image.height == 0 || image.width == 0) {
    throw ImageError(ImageErrorCode::unsupported_format, "cannot save an empty image");
  }
  const auto ext = path.extension();
  if (ext == ".ppm" || ext == ".pgm") {
    if ((ext == ".ppm") != (image.channels == 3)) {
      throw ImageError(ImageErrorCode::unsupported_format,
                       "channel count does not match " + ext.string());
    }
    write_pnm(image, path);
  } else {
    write_png(image, path);
  }
}

std::vector<double> pixel_coordinates(std::size_t h, std::size_t w) {
  std::vector<double> coords(h * w * 2);
  for (std::size_t i = 0; i < h; ++i) {
    for (std::size_t j = 0; j < w; ++j) {
      coords[2 * (i * w + j)] = static_cast<double>(j) / static_cast<double>(w);
      coords[2 * (i * w + j) + 1] = static_cast<double>(i) / static_cast<double>(h);
    }
  }
  return coords;
}

ImageGrid render(const NetworkParams& params, std::size_t h, std::size_t w, double x_offset,
                 double y_offset) {
  if (params.in_dim() != 2) throw InvalidArgument("render: network must take 2-D coordinates");
  auto coords = pixel_coordinates(h, w);
  for (std::size_t p = 0; p < h * w; ++p) {
    coords[2 * p] += x_offset;
    coords[2 * p + 1] += y_offset;
  }
  ImageGrid image;
  image.height = h;
  image.width = w;
  image.channels = params.out_dim();
  image.data = forward_batch(params, coords);
  return image;
}

}  // namespace finr
