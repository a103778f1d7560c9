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

#include "steforge/text_render.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "steforge/error.hpp"

namespace steforge {

namespace {

// Fraction of the canvas height used for standard-format text.
constexpr double kContentSizeFraction = 0.6;

struct RunLayout {
  std::vector<double> pen;      // pen x of each glyph relative to the run start
  std::vector<double> advance;  // advance of each glyph
  double width = 0.0;
  FontMetrics metrics;
};

RunLayout measure(std::string_view text, int font_id, double px, const FontRasterizer& r) {
  RunLayout layout;
  layout.metrics = r.metrics(font_id, px);
  double pen = 0.0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<char32_t>(static_cast<unsigned char>(text[i]));
    const double adv = r.advance(font_id, c, px);
    layout.pen.push_back(pen);
    layout.advance.push_back(adv);
    pen += adv;
    if (i + 1 < text.size()) {
      pen += r.kerning(font_id, c, static_cast<char32_t>(static_cast<unsigned char>(text[i + 1])), px);
    }
  }
  layout.width = pen;
  return layout;
}

struct Extent {
  double width;
  double height;
};

Extent styled_extent(const RunLayout& layout, const TextStyle& style) {
  double w = layout.width;
  double h = layout.metrics.ascent - layout.metrics.descent;
  if (style.border) {
    w += 2.0 * style.border->width;
    h += 2.0 * style.border->width;
  }
  if (style.shadow) {
    w += std::abs(style.shadow->offset[0]);
    h += std::abs(style.shadow->offset[1]);
  }
  h += 2.0 * std::abs(style.curve_amplitude);
  return {w, h};
}

// Union-combined coverage of the glyph run, values in [0,1].
std::vector<double> fill_coverage(std::string_view text, const TextStyle& style, double px, const RunLayout& layout,
                                  Dims canvas, const FontRasterizer& r) {
  const int H = canvas.height;
  const int W = canvas.width;
  std::vector<double> cov(canvas.area(), 0.0);

  const double origin_x = (W - layout.width) / 2.0;
  const double baseline = H / 2.0 + (layout.metrics.ascent + layout.metrics.descent) / 2.0;

  for (std::size_t i = 0; i < text.size(); ++i) {
    const double gx = origin_x + layout.pen[i];
    double gy = baseline;
    if (style.curve_amplitude != 0.0) {
      const double center_x = gx + layout.advance[i] / 2.0;
      gy += style.curve_amplitude * std::sin(2.0 * std::numbers::pi * center_x / style.curve_period);
    }
    const double ix = std::floor(gx);
    const double iy = std::floor(gy);
    const auto c = static_cast<char32_t>(static_cast<unsigned char>(text[i]));
    const GlyphBitmap g = r.rasterize_glyph(style.font_id, c, px, gx - ix, gy - iy);

    const int ox = static_cast<int>(ix) + g.left;
    const int oy = static_cast<int>(iy) + g.top;
    for (int y = 0; y < g.height; ++y) {
      const int cy = oy + y;
      if (cy < 0 || cy >= H) continue;
      for (int x = 0; x < g.width; ++x) {
        const int cx = ox + x;
        if (cx < 0 || cx >= W) continue;
        const double a = g.coverage[static_cast<std::size_t>(y * g.width + x)] / 255.0;
        if (a == 0.0) continue;
        double& dst = cov[static_cast<std::size_t>(cy * W + cx)];
        dst = 1.0 - (1.0 - dst) * (1.0 - a);
      }
    }
  }
  return cov;
}

// Grayscale dilation with a disk of the given radius.
std::vector<double> dilate(const std::vector<double>& src, Dims canvas, int radius) {
  const int H = canvas.height;
  const int W = canvas.width;
  std::vector<std::pair<int, int>> offsets;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      if (dx * dx + dy * dy <= radius * radius) offsets.emplace_back(dx, dy);
    }
  }
  std::vector<double> out(src.size(), 0.0);
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      double m = 0.0;
      for (const auto& [dx, dy] : offsets) {
        const int sx = x + dx;
        const int sy = y + dy;
        if (sx < 0 || sy < 0 || sx >= W || sy >= H) continue;
        m = std::max(m, src[static_cast<std::size_t>(sy * W + sx)]);
      }
      out[static_cast<std::size_t>(y * W + x)] = m;
    }
  }
  return out;
}

void check_text(std::string_view text, const Charset& charset) {
  if (text.empty()) fail(ErrorKind::EmptyText, "text must not be empty");
  for (char c : text) {
    if (!charset.contains(c)) fail(ErrorKind::InvalidCharacter, std::string("character '") + c + "' not in charset");
  }
}

}  // namespace

GlyphLayer rasterize_text(std::string_view text, const TextStyle& style, Dims canvas, const FontRasterizer& rasterizer,
                          const Charset& charset) {
  check_text(text, charset);
  validate_style(style);
  if (static_cast<std::size_t>(style.font_id) >= rasterizer.font_count()) {
    fail(ErrorKind::UnknownFont, "font id " + std::to_string(style.font_id) + " not available");
  }
  if (canvas.height < 1 || canvas.width < 1) fail(ErrorKind::InvalidArgument, "empty canvas");

  // Auto-shrink in 1px steps until the styled run fits, but never below 8px.
  int px = style.size;
  RunLayout layout = measure(text, style.font_id, px, rasterizer);
  for (;;) {
    const Extent e = styled_extent(layout, style);
    if (e.width <= canvas.width && e.height <= canvas.height) break;
    if (px <= kMinTextSize) {
      fail(ErrorKind::TextWiderThanCanvas, "'" + std::string(text) + "' does not fit a " +
                                               std::to_string(canvas.width) + "px canvas at " +
                                               std::to_string(kMinTextSize) + "px");
    }
    --px;
    layout = measure(text, style.font_id, px, rasterizer);
  }

  const std::vector<double> fill = fill_coverage(text, style, px, layout, canvas, rasterizer);
  const std::size_t n = canvas.area();

  std::vector<double> border(n, 0.0);
  if (style.border) border = dilate(fill, canvas, style.border->width);

  std::vector<double> shadow(n, 0.0);
  if (style.shadow) {
    const int W = canvas.width;
    const int H = canvas.height;
    const auto [dx, dy] = style.shadow->offset;
    for (int y = 0; y < H; ++y) {
      for (int x = 0; x < W; ++x) {
        const int sx = x - dx;
        const int sy = y - dy;
        if (sx < 0 || sy < 0 || sx >= W || sy >= H) continue;
        const auto s = static_cast<std::size_t>(sy * W + sx);
        const double under = 1.0 - (1.0 - fill[s]) * (1.0 - border[s]);
        shadow[static_cast<std::size_t>(y * W + x)] = style.shadow->alpha * under;
      }
    }
  }

  // Outermost present layer colors pixels nothing covers, so later bilinear
  // warps do not bleed an arbitrary color into the glyph edge.
  Rgb outer = style.fill_color;
  if (style.border) outer = style.border->color;
  if (style.shadow) outer = style.shadow->color;

  GlyphLayer layer{Image(canvas.height, canvas.width, 3), Image(canvas.height, canvas.width, 1)};
  auto color = layer.color.data();
  auto alpha = layer.alpha.data();
  const Rgb border_color = style.border ? style.border->color : Rgb{0, 0, 0};
  const Rgb shadow_color = style.shadow ? style.shadow->color : Rgb{0, 0, 0};
  for (std::size_t p = 0; p < n; ++p) {
    const double wf = fill[p];
    const double wb = border[p] * (1.0 - wf);
    const double ws = shadow[p] * (1.0 - wf) * (1.0 - border[p]);
    const double a = 1.0 - (1.0 - fill[p]) * (1.0 - border[p]) * (1.0 - shadow[p]);
    for (std::size_t c = 0; c < 3; ++c) {
      double v = outer[c];
      if (a > 0.0) {
        v = (wf * style.fill_color[c] + wb * border_color[c] + ws * shadow_color[c]) / a;
      }
      color[3 * p + c] = static_cast<float>(std::clamp(v, 0.0, 1.0));
    }
    alpha[p] = static_cast<float>(static_cast<double>(style.opacity) * a);
  }
  return layer;
}

Image render_content_image(std::string_view text, Dims canvas, const FontRasterizer& rasterizer, float background) {
  if (text.empty()) fail(ErrorKind::EmptyText, "text must not be empty");
  TextStyle style;
  style.font_id = 0;
  style.size = std::max(kMinTextSize, static_cast<int>(std::lround(kContentSizeFraction * canvas.height)));
  style.fill_color = {0.0f, 0.0f, 0.0f};
  style.opacity = 1.0f;
  const GlyphLayer layer = rasterize_text(text, style, canvas, rasterizer);
  return composite(layer, Image(canvas.height, canvas.width, 3, background));
}

Image render_content_image(std::string_view text, Dims canvas, float background) {
  return render_content_image(text, canvas, standard_rasterizer(), background);
}

Image composite(const GlyphLayer& fg, const Image& bg) {
  if (fg.color.dims() != bg.dims() || fg.alpha.dims() != bg.dims()) {
    fail(ErrorKind::DimMismatch, "glyph layer and background dimensions differ");
  }
  if (bg.channels() != 3 || fg.color.channels() != 3 || fg.alpha.channels() != 1) {
    fail(ErrorKind::DimMismatch, "composite expects 3-channel color/background and 1-channel alpha");
  }
  Image out = bg;
  auto dst = out.data();
  const auto color = fg.color.data();
  const auto alpha = fg.alpha.data();
  for (std::size_t p = 0; p < alpha.size(); ++p) {
    const float a = alpha[p];
    if (a == 0.0f) continue;
    for (std::size_t c = 0; c < 3; ++c) {
      const float f = color[3 * p + c];
      const float b = dst[3 * p + c];
      if (a == 1.0f) {
        dst[3 * p + c] = f;
        continue;
      }
      // Clamping to the endpoints keeps the result a convex combination
      // despite float rounding.
      const float v = a * f + (1.0f - a) * b;
      dst[3 * p + c] = std::clamp(v, std::min(f, b), std::max(f, b));
    }
  }
  return out;
}

const FontRasterizer& standard_rasterizer() {
  thread_local const StbFontRasterizer rasterizer(standard_font_set());
  return rasterizer;
}

}  // namespace steforge
