// Copyright 2026 The ste-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file image.hpp
 * @brief Pixel rasters shared by every module.
 *
 * Pixels live in floating point [0,1] internally. Quantization to 8 bits only
 * happens at file boundaries (to_bytes / from_bytes). Layout is row-major with
 * interleaved channels: index = (y * width + x) * channels + c.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace steforge {

struct Dims {
  int height = 0;
  int width = 0;

  friend bool operator==(const Dims&, const Dims&) = default;
  std::size_t area() const { return static_cast<std::size_t>(height) * static_cast<std::size_t>(width); }
};

/// H x W x C raster, C in {1, 3}, values in [0,1].
class Image {
 public:
  Image() = default;
  Image(int height, int width, int channels, float fill = 0.0f);
  /// Validates length and range; throws Error(InvalidImage) on violation.
  Image(int height, int width, int channels, std::vector<float> data);

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  Dims dims() const { return {height_, width_}; }
  bool empty() const { return data_.empty(); }
  std::size_t size() const { return data_.size(); }

  float at(int y, int x, int c = 0) const { return data_[index(y, x, c)]; }
  float& at(int y, int x, int c = 0) { return data_[index(y, x, c)]; }

  std::span<const float> data() const { return data_; }
  std::span<float> data() { return data_; }

  std::size_t index(int y, int x, int c = 0) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) *
               static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<float> data_;
};

/// H x W binary raster with values in {0, 1}.
class Mask {
 public:
  Mask() = default;
  Mask(int height, int width, std::uint8_t fill = 0);
  /// Validates length and that every value is 0 or 1.
  Mask(int height, int width, std::vector<std::uint8_t> data);

  int height() const { return height_; }
  int width() const { return width_; }
  Dims dims() const { return {height_, width_}; }
  std::size_t size() const { return data_.size(); }

  std::uint8_t at(int y, int x) const { return data_[index(y, x)]; }
  std::uint8_t& at(int y, int x) { return data_[index(y, x)]; }
  /// Out-of-bounds reads return 0.
  std::uint8_t get(int y, int x) const {
    return (y < 0 || x < 0 || y >= height_ || x >= width_) ? 0 : data_[index(y, x)];
  }

  std::span<const std::uint8_t> data() const { return data_; }
  std::span<std::uint8_t> data() { return data_; }
  std::size_t count() const;

  std::size_t index(int y, int x) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  friend bool operator==(const Mask&, const Mask&) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<std::uint8_t> data_;
};

/// 8-bit raster as stored in files.
struct ByteRaster {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<std::uint8_t> data;

  friend bool operator==(const ByteRaster&, const ByteRaster&) = default;
};

/// round(v * 255), half-up.
std::uint8_t quantize(float v);

ByteRaster to_bytes(const Image& img);
Image from_bytes(const ByteRaster& raster);

/// Masks are stored as {0, 255}.
ByteRaster mask_to_bytes(const Mask& mask);
/// Requires every byte to be 0 or 255; throws Error(InvalidImage) otherwise.
Mask mask_from_bytes(const ByteRaster& raster);

/// Luma (0.299 R + 0.587 G + 0.114 B) for 3-channel images; copy for 1-channel.
Image to_luma(const Image& img);

/// Single channel view of a mask as an image with values {0,1}.
Image mask_to_image(const Mask& mask);

}  // namespace steforge
