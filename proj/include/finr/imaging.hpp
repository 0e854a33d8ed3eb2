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

#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "finr/network.hpp"

namespace finr {

// Row-major, channel-interleaved pixels. Loaded and saved images hold values
// in [0, 1]; render() output is left unclamped so that metrics see the raw
// network values, and clamping happens when saving.
struct ImageGrid {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 1;
  std::vector<double> data;

  ImageGrid() = default;
  ImageGrid(std::size_t h, std::size_t w, std::size_t c, double fill = 0.0)
      : height(h), width(w), channels(c), data(h * w * c, fill) {}

  double& at(std::size_t row, std::size_t col, std::size_t ch) {
    return data[(row * width + col) * channels + ch];
  }
  double at(std::size_t row, std::size_t col, std::size_t ch) const {
    return data[(row * width + col) * channels + ch];
  }
  std::size_t pixel_count() const { return height * width; }

  ImageGrid clamped() const;
  bool operator==(const ImageGrid&) const = default;
};

// PNG (8-bit gray, gray+alpha, RGB, RGBA; alpha dropped, palettes expanded)
// and binary PGM/PPM. Format is detected from the file's leading bytes.
// Throws ImageError with code io, unsupported_format or corrupt.
ImageGrid load_image(const std::filesystem::path& path);

// Values are clamped to [0, 1] and quantized as round(255 v). ".ppm"/".pgm"
// write binary netpbm, anything else writes PNG.
void save_image(const ImageGrid& image, const std::filesystem::path& path);

// h*w coordinates, row-major over pixels: pixel (i, j) -> (j / w, i / h).
std::vector<double> pixel_coordinates(std::size_t h, std::size_t w);

// Evaluates the network at pixel_coordinates(h, w) shifted by the offsets.
ImageGrid render(const NetworkParams& params, std::size_t h, std::size_t w, double x_offset = 0.0,
                 double y_offset = 0.0);

}  // namespace finr
