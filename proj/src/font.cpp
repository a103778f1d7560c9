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

#include "steforge/font.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>

#include "steforge/error.hpp"

#if defined(__GNUC__)
#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wall"
#pragma GCC diagnostic ignored "-Wextra"
#pragma GCC diagnostic ignored "-Wconversion"
#pragma GCC diagnostic ignored "-Wsign-conversion"
#pragma GCC diagnostic ignored "-Wunused-function"
#endif
#define STB_TRUETYPE_IMPLEMENTATION
#define STBTT_STATIC
#include "stb_truetype.h"
#if defined(__GNUC__)
#pragma GCC diagnostic pop
#endif

namespace steforge {

// Defined in the generated standard_font_data.cpp.
extern const unsigned char kStandardFontData[];
extern const std::size_t kStandardFontSize;

namespace {

bool init_font(stbtt_fontinfo& info, const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 12) return false;
  const int offset = stbtt_GetFontOffsetForIndex(bytes.data(), 0);
  if (offset < 0) return false;
  return stbtt_InitFont(&info, bytes.data(), offset) != 0;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

FontSet FontSet::load_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) fail(ErrorKind::Io, "font directory not found: " + dir.string());

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = lower(entry.path().extension().string());
    if (ext == ".ttf" || ext == ".otf") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  FontSet set;
  for (const auto& path : files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot read font " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    set.add(path.filename().string(), std::move(bytes));
  }
  return set;
}

void FontSet::add(std::string name, std::vector<std::uint8_t> bytes) {
  stbtt_fontinfo probe;
  if (!init_font(probe, bytes)) fail(ErrorKind::InvalidArgument, "not a usable font: " + name);
  fonts_.push_back({std::move(name), std::move(bytes)});
}

struct StbFontRasterizer::Impl {
  std::vector<stbtt_fontinfo> infos;

  const stbtt_fontinfo& info(int font_id) const {
    if (font_id < 0 || static_cast<std::size_t>(font_id) >= infos.size()) {
      fail(ErrorKind::UnknownFont, "font id " + std::to_string(font_id) + " not in a set of " +
                                       std::to_string(infos.size()));
    }
    return infos[static_cast<std::size_t>(font_id)];
  }
};

StbFontRasterizer::StbFontRasterizer(std::shared_ptr<const FontSet> fonts)
    : fonts_(std::move(fonts)), impl_(std::make_unique<Impl>()) {
  if (!fonts_) fail(ErrorKind::InvalidArgument, "null font set");
  impl_->infos.resize(fonts_->size());
  for (std::size_t i = 0; i < fonts_->size(); ++i) {
    if (!init_font(impl_->infos[i], fonts_->bytes(i))) fail(ErrorKind::InvalidArgument, "font failed to load");
  }
}

StbFontRasterizer::~StbFontRasterizer() = default;

std::size_t StbFontRasterizer::font_count() const { return impl_->infos.size(); }

FontMetrics StbFontRasterizer::metrics(int font_id, double pixel_height) const {
  const auto& info = impl_->info(font_id);
  const float scale = stbtt_ScaleForPixelHeight(&info, static_cast<float>(pixel_height));
  int ascent = 0, descent = 0, line_gap = 0;
  stbtt_GetFontVMetrics(&info, &ascent, &descent, &line_gap);
  return {ascent * static_cast<double>(scale), descent * static_cast<double>(scale)};
}

double StbFontRasterizer::advance(int font_id, char32_t codepoint, double pixel_height) const {
  const auto& info = impl_->info(font_id);
  const float scale = stbtt_ScaleForPixelHeight(&info, static_cast<float>(pixel_height));
  int adv = 0, lsb = 0;
  stbtt_GetCodepointHMetrics(&info, static_cast<int>(codepoint), &adv, &lsb);
  return adv * static_cast<double>(scale);
}

double StbFontRasterizer::kerning(int font_id, char32_t left, char32_t right, double pixel_height) const {
  const auto& info = impl_->info(font_id);
  const float scale = stbtt_ScaleForPixelHeight(&info, static_cast<float>(pixel_height));
  return stbtt_GetCodepointKernAdvance(&info, static_cast<int>(left), static_cast<int>(right)) *
         static_cast<double>(scale);
}

GlyphBitmap StbFontRasterizer::rasterize_glyph(int font_id, char32_t codepoint, double pixel_height,
                                               double shift_x, double shift_y) const {
  const auto& info = impl_->info(font_id);
  const float scale = stbtt_ScaleForPixelHeight(&info, static_cast<float>(pixel_height));
  const auto sx = static_cast<float>(shift_x);
  const auto sy = static_cast<float>(shift_y);
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  stbtt_GetCodepointBitmapBoxSubpixel(&info, static_cast<int>(codepoint), scale, scale, sx, sy, &x0, &y0, &x1, &y1);

  GlyphBitmap glyph;
  glyph.left = x0;
  glyph.top = y0;
  glyph.width = std::max(0, x1 - x0);
  glyph.height = std::max(0, y1 - y0);
  if (glyph.width == 0 || glyph.height == 0) {
    glyph.width = glyph.height = 0;
    return glyph;
  }
  glyph.coverage.assign(static_cast<std::size_t>(glyph.width) * static_cast<std::size_t>(glyph.height), 0);
  stbtt_MakeCodepointBitmapSubpixel(&info, glyph.coverage.data(), glyph.width, glyph.height, glyph.width, scale,
                                    scale, sx, sy, static_cast<int>(codepoint));
  return glyph;
}

std::shared_ptr<const FontSet> standard_font_set() {
  static const std::shared_ptr<const FontSet> set = [] {
    auto fonts = std::make_shared<FontSet>();
    fonts->add("DejaVuSans.ttf",
               std::vector<std::uint8_t>(kStandardFontData, kStandardFontData + kStandardFontSize));
    return std::shared_ptr<const FontSet>(std::move(fonts));
  }();
  return set;
}

}  // namespace steforge
