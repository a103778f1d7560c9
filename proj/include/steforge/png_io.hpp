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

#pragma once

#include <filesystem>

#include "steforge/image.hpp"

namespace steforge {

/// Decodes an 8-bit PNG. Gray(+alpha) becomes 1 channel, everything else 3
/// channels; alpha channels are dropped and 16-bit input is stripped to 8 bits.
/// Throws Error(Io) if the file cannot be opened or decoded.
ByteRaster read_png(const std::filesystem::path& path);

/// Encodes 1- or 3-channel rasters. Output bytes depend only on the pixels
/// (fixed compression settings, no time chunk).
void write_png(const std::filesystem::path& path, const ByteRaster& raster);

Image read_image(const std::filesystem::path& path);
void write_image(const std::filesystem::path& path, const Image& img);

/// Reads a {0,255} PNG; throws Error(InvalidImage) for any other value.
Mask read_mask(const std::filesystem::path& path);
void write_mask(const std::filesystem::path& path, const Mask& mask);

}  // namespace steforge
