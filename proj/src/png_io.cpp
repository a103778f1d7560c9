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

#include "steforge/png_io.hpp"

#include <png.h>

#include <cstring>

#include "steforge/error.hpp"

namespace steforge {

ByteRaster read_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    const std::string reason = image.message;
    png_image_free(&image);
    fail(ErrorKind::Io, "cannot read PNG " + path.string() + ": " + reason);
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

  ByteRaster raster;
  raster.height = static_cast<int>(image.height);
  raster.width = static_cast<int>(image.width);
  raster.channels = color ? 3 : 1;
  raster.data.resize(PNG_IMAGE_SIZE(image));
  // Background for flattening any alpha channel: black.
  png_color background{0, 0, 0};
  if (!png_image_finish_read(&image, &background, raster.data.data(), 0, nullptr)) {
    const std::string reason = image.message;
    png_image_free(&image);
    fail(ErrorKind::Io, "cannot decode PNG " + path.string() + ": " + reason);
  }
  return raster;
}

void write_png(const std::filesystem::path& path, const ByteRaster& raster) {
  if (raster.channels != 1 && raster.channels != 3) {
    fail(ErrorKind::InvalidArgument, "PNG output needs 1 or 3 channels");
  }
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(raster.width);
  image.height = static_cast<png_uint_32>(raster.height);
  image.format = raster.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, raster.data.data(), 0, nullptr)) {
    const std::string reason = image.message;
    png_image_free(&image);
    fail(ErrorKind::Io, "cannot write PNG " + path.string() + ": " + reason);
  }
}

Image read_image(const std::filesystem::path& path) { return from_bytes(read_png(path)); }

void write_image(const std::filesystem::path& path, const Image& img) { write_png(path, to_bytes(img)); }

Mask read_mask(const std::filesystem::path& path) {
  try {
    return mask_from_bytes(read_png(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidImage) fail(ErrorKind::InvalidImage, path.string() + ": " + e.what());
    throw;
  }
}

void write_mask(const std::filesystem::path& path, const Mask& mask) { write_png(path, mask_to_bytes(mask)); }

}  // namespace steforge
