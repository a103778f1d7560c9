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
 * @file font.hpp
 * @brief Font loading and the glyph rasterization provider interface.
 *
 * A FontSet owns raw font file bytes and is safe to share read-only across
 * threads. A FontRasterizer is a per-thread view over a FontSet that turns
 * single glyphs into 8-bit coverage bitmaps; text layout lives in
 * text_render on top of this interface.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace steforge {

struct FontMetrics {
  double ascent = 0.0;   // pixels above the baseline (positive)
  double descent = 0.0;  // pixels below the baseline (negative)
};

/// Coverage bitmap of one glyph. (left, top) is the offset of the bitmap's
/// top-left pixel from the integer pen position on the baseline.
struct GlyphBitmap {
  int width = 0;
  int height = 0;
  int left = 0;
  int top = 0;
  std::vector<std::uint8_t> coverage;
};

class FontSet {
 public:
  FontSet() = default;

  /// Loads every .ttf/.otf in `dir`, sorted by filename. Throws Error(Io).
  static FontSet load_dir(const std::filesystem::path& dir);

  /// Registers a font from memory. Throws Error(InvalidArgument) if the bytes
  /// do not parse as a font.
  void add(std::string name, std::vector<std::uint8_t> bytes);

  std::size_t size() const { return fonts_.size(); }
  bool empty() const { return fonts_.empty(); }
  const std::string& name(std::size_t id) const { return fonts_.at(id).name; }
  const std::vector<std::uint8_t>& bytes(std::size_t id) const { return fonts_.at(id).bytes; }

 private:
  struct Entry {
    std::string name;
    std::vector<std::uint8_t> bytes;
  };
  std::vector<Entry> fonts_;
};

/// Glyph rasterization provider. Instances are not thread-safe; give each
/// worker its own.
class FontRasterizer {
 public:
  virtual ~FontRasterizer() = default;

  virtual std::size_t font_count() const = 0;
  /// Metrics at a pixel height that maps ascent - descent onto `pixel_height`.
  virtual FontMetrics metrics(int font_id, double pixel_height) const = 0;
  virtual double advance(int font_id, char32_t codepoint, double pixel_height) const = 0;
  virtual double kerning(int font_id, char32_t left, char32_t right, double pixel_height) const = 0;
  /// shift_x / shift_y in [0,1) place the glyph at a sub-pixel pen position.
  virtual GlyphBitmap rasterize_glyph(int font_id, char32_t codepoint, double pixel_height, double shift_x,
                                      double shift_y) const = 0;
};

/// Provider backed by stb_truetype.
class StbFontRasterizer final : public FontRasterizer {
 public:
  explicit StbFontRasterizer(std::shared_ptr<const FontSet> fonts);
  ~StbFontRasterizer() override;

  StbFontRasterizer(const StbFontRasterizer&) = delete;
  StbFontRasterizer& operator=(const StbFontRasterizer&) = delete;

  std::size_t font_count() const override;
  FontMetrics metrics(int font_id, double pixel_height) const override;
  double advance(int font_id, char32_t codepoint, double pixel_height) const override;
  double kerning(int font_id, char32_t left, char32_t right, double pixel_height) const override;
  GlyphBitmap rasterize_glyph(int font_id, char32_t codepoint, double pixel_height, double shift_x,
                              double shift_y) const override;

 private:
  struct Impl;
  std::shared_ptr<const FontSet> fonts_;
  std::unique_ptr<Impl> impl_;
};

/// The standard-format font (DejaVu Sans, compiled into the library).
std::shared_ptr<const FontSet> standard_font_set();

}  // namespace steforge
