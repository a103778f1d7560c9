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

#include "steforge/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "steforge/error.hpp"

namespace steforge {

namespace {

void check_shape(int height, int width, int channels) {
  if (height < 1 || width < 1) {
    fail(ErrorKind::InvalidImage, "dimensions must be positive, got " + std::to_string(height) + "x" +
                                      std::to_string(width));
  }
  if (channels != 1 && channels != 3) {
    fail(ErrorKind::InvalidImage, "channels must be 1 or 3, got " + std::to_string(channels));
  }
}

}  // namespace

Image::Image(int height, int width, int channels, float fill)
    : height_(height), width_(width), channels_(channels) {
  check_shape(height, width, channels);
  if (!(fill >= 0.0f && fill <= 1.0f)) fail(ErrorKind::InvalidImage, "fill value outside [0,1]");
  data_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width) * static_cast<std::size_t>(channels),
               fill);
}

Image::Image(int height, int width, int channels, std::vector<float> data)
    : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
  check_shape(height, width, channels);
  const auto expected =
      static_cast<std::size_t>(height) * static_cast<std::size_t>(width) * static_cast<std::size_t>(channels);
  if (data_.size() != expected) {
    fail(ErrorKind::InvalidImage,
         "data length " + std::to_string(data_.size()) + " != " + std::to_string(expected));
  }
  for (float v : data_) {
    // Negated comparison also rejects NaN.
    if (!(v >= 0.0f && v <= 1.0f)) fail(ErrorKind::InvalidImage, "pixel value outside [0,1]");
  }
}

Mask::Mask(int height, int width, std::uint8_t fill) : height_(height), width_(width) {
  check_shape(height, width, 1);
  if (fill > 1) fail(ErrorKind::InvalidImage, "mask fill must be 0 or 1");
  data_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill);
}

Mask::Mask(int height, int width, std::vector<std::uint8_t> data)
    : height_(height), width_(width), data_(std::move(data)) {
  check_shape(height, width, 1);
  if (data_.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width)) {
    fail(ErrorKind::InvalidImage, "mask data length mismatch");
  }
  if (std::any_of(data_.begin(), data_.end(), [](std::uint8_t v) { return v > 1; })) {
    fail(ErrorKind::InvalidImage, "mask values must be 0 or 1");
  }
}

std::size_t Mask::count() const {
  return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

std::uint8_t quantize(float v) {
  const float clamped = std::clamp(v, 0.0f, 1.0f);
  return static_cast<std::uint8_t>(std::floor(clamped * 255.0f + 0.5f));
}

ByteRaster to_bytes(const Image& img) {
  ByteRaster out{img.height(), img.width(), img.channels(), {}};
  out.data.resize(img.size());
  std::transform(img.data().begin(), img.data().end(), out.data.begin(), quantize);
  return out;
}

Image from_bytes(const ByteRaster& raster) {
  if (raster.data.size() != static_cast<std::size_t>(raster.height) * static_cast<std::size_t>(raster.width) *
                                static_cast<std::size_t>(raster.channels)) {
    fail(ErrorKind::InvalidImage, "byte raster length mismatch");
  }
  std::vector<float> data(raster.data.size());
  std::transform(raster.data.begin(), raster.data.end(), data.begin(),
                 [](std::uint8_t b) { return static_cast<float>(b) / 255.0f; });
  return Image(raster.height, raster.width, raster.channels, std::move(data));
}

ByteRaster mask_to_bytes(const Mask& mask) {
  ByteRaster out{mask.height(), mask.width(), 1, {}};
  out.data.resize(mask.size());
  std::transform(mask.data().begin(), mask.data().end(), out.data.begin(),
                 [](std::uint8_t v) { return static_cast<std::uint8_t>(v ? 255 : 0); });
  return out;
}

Mask mask_from_bytes(const ByteRaster& raster) {
  if (raster.channels != 1) fail(ErrorKind::InvalidImage, "mask raster must be single-channel");
  std::vector<std::uint8_t> data(raster.data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::uint8_t b = raster.data[i];
    if (b != 0 && b != 255) fail(ErrorKind::InvalidImage, "mask contains value " + std::to_string(b));
    data[i] = b == 255 ? 1 : 0;
  }
  return Mask(raster.height, raster.width, std::move(data));
}

Image to_luma(const Image& img) {
  if (img.channels() == 1) return img;
  Image out(img.height(), img.width(), 1);
  const auto src = img.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const double y = 0.299 * src[3 * i] + 0.587 * src[3 * i + 1] + 0.114 * src[3 * i + 2];
    dst[i] = static_cast<float>(std::clamp(y, 0.0, 1.0));
  }
  return out;
}

Image mask_to_image(const Mask& mask) {
  Image out(mask.height(), mask.width(), 1);
  std::transform(mask.data().begin(), mask.data().end(), out.data().begin(),
                 [](std::uint8_t v) { return static_cast<float>(v); });
  return out;
}

}  // namespace steforge
