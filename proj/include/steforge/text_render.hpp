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

#include <string_view>

#include "steforge/charset.hpp"
#include "steforge/data_model.hpp"
#include "steforge/font.hpp"
#include "steforge/image.hpp"

namespace steforge {

/// Rendered text before compositing: un-premultiplied color plus coverage.
struct GlyphLayer {
  Image color;  // 3 channels
  Image alpha;  // 1 channel

  Dims dims() const { return alpha.dims(); }
  friend bool operator==(const GlyphLayer&, const GlyphLayer&) = default;
};

/// Neutral background of the standard-format content image and of t_fg.
inline constexpr float kNeutralGray = 0.5f;
/// Auto-shrink stops here; text that still does not fit is an error.
inline constexpr int kMinTextSize = 8;

/// Renders `text` centered on the canvas. Layers stack shadow < border < fill;
/// the final alpha is scaled by style.opacity. Curvature offsets each glyph
/// vertically by a * sin(2 pi x / p) where x is the glyph center.
///
/// Throws EmptyText, InvalidCharacter, UnknownFont, TextWiderThanCanvas.
GlyphLayer rasterize_text(std::string_view text, const TextStyle& style, Dims canvas,
                          const FontRasterizer& rasterizer,
                          const Charset& charset = Charset::letters_digits());

/// Standard-format content image: bundled sans font, black, centered on gray.
Image render_content_image(std::string_view text, Dims canvas, float background = kNeutralGray);

/// Same as above with an explicit standard-font provider.
Image render_content_image(std::string_view text, Dims canvas, const FontRasterizer& rasterizer,
                           float background = kNeutralGray);

/// Alpha-over: out = alpha * color + (1 - alpha) * bg. Throws DimMismatch.
Image composite(const GlyphLayer& fg, const Image& bg);

/// Per-thread provider for the compiled-in standard font.
const FontRasterizer& standard_rasterizer();

}  // namespace steforge
