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

#include <doctest.h>

#include <algorithm>
#include <memory>
#include <random>

#include "steforge/error.hpp"
#include "steforge/font.hpp"
#include "steforge/text_render.hpp"
#include "test_support.hpp"

using namespace steforge;

namespace {

const StbFontRasterizer& bundled() {
  static const StbFontRasterizer r(std::make_shared<const FontSet>(FontSet::load_dir(testing::asset_dir() / "fonts")));
  return r;
}

float max_of(const Image& img) { return *std::max_element(img.data().begin(), img.data().end()); }

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_SUITE("text_render") {
  TEST_CASE("bundled fonts load") {
    CHECK(bundled().font_count() == 3);
    const FontMetrics m = bundled().metrics(0, 40.0);
    CHECK(m.ascent > 0.0);
    CHECK(m.descent < 0.0);
    CHECK(m.ascent - m.descent == doctest::Approx(40.0).epsilon(1e-6));
    CHECK(standard_font_set()->size() == 1);
  }

  TEST_CASE("zero opacity gives zero coverage") {
    TextStyle s;
    s.opacity = 0.0f;
    const GlyphLayer g = rasterize_text("A", s, {64, 256}, bundled());
    CHECK(max_of(g.alpha) == 0.0f);
  }

  TEST_CASE("full opacity reaches full coverage inside the glyph") {
    TextStyle s;
    s.opacity = 1.0f;
    const GlyphLayer g = rasterize_text("A", s, {64, 256}, bundled());
    CHECK(max_of(g.alpha) == 1.0f);
    CHECK(g.color.channels() == 3);
    CHECK(g.alpha.channels() == 1);
    CHECK(g.dims() == Dims{64, 256});
  }

  TEST_CASE("rendering is deterministic") {
    TextStyle s;
    s.fill_color = {0.9f, 0.2f, 0.1f};
    s.border = Border{{0.0f, 0.0f, 0.3f}, 2};
    s.shadow = Shadow{{2, 3}, {0.1f, 0.1f, 0.1f}, 0.6f};
    s.curve_amplitude = 3.0;
    s.curve_period = 90.0;
    s.opacity = 0.8f;
    for (int font = 0; font < 3; ++font) {
      s.font_id = font;
      CHECK(rasterize_text("Quartz", s, {64, 256}, bundled()) == rasterize_text("Quartz", s, {64, 256}, bundled()));
    }
  }

  TEST_CASE("alpha never exceeds opacity") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    for (int i = 0; i < 40; ++i) {
      TextStyle s;
      s.font_id = i % 3;
      s.opacity = u(rng);
      s.size = 20 + i;
      if (i % 3 == 0) s.border = Border{{1.0f, 1.0f, 1.0f}, 1 + i % 3};
      if (i % 4 == 0) s.shadow = Shadow{{1, 2}, {0.0f, 0.0f, 0.0f}, 0.9f};
      const GlyphLayer g = rasterize_text("Glyph", s, {64, 256}, bundled());
      CHECK(max_of(g.alpha) <= s.opacity);
    }
  }

  TEST_CASE("long words shrink instead of failing") {
    TextStyle s;
    s.size = 60;
    const GlyphLayer g = rasterize_text("Incomprehensibilities", s, {64, 256}, bundled());
    // Nothing touches the left or right edge column.
    for (int y = 0; y < 64; ++y) {
      CHECK(g.alpha.at(y, 0) == 0.0f);
      CHECK(g.alpha.at(y, 255) == 0.0f);
    }
    CHECK(kind_of([&] { rasterize_text(std::string(200, 'W'), s, {64, 256}, bundled()); }) ==
          ErrorKind::TextWiderThanCanvas);
  }

  TEST_CASE("input errors") {
    TextStyle s;
    CHECK(kind_of([&] { rasterize_text("", s, {64, 256}, bundled()); }) == ErrorKind::EmptyText);
    CHECK(kind_of([&] { rasterize_text("a b", s, {64, 256}, bundled()); }) == ErrorKind::InvalidCharacter);
    CHECK(kind_of([&] { rasterize_text("a1", s, {64, 256}, bundled(), Charset::letters()); }) ==
          ErrorKind::InvalidCharacter);
    s.font_id = 7;
    CHECK(kind_of([&] { rasterize_text("a", s, {64, 256}, bundled()); }) == ErrorKind::UnknownFont);
  }

  TEST_CASE("content image: size, gray background, determinism") {
    const Image img = render_content_image("test", {64, 256});
    CHECK(img.dims() == Dims{64, 256});
    CHECK(img.channels() == 3);
    for (int c = 0; c < 3; ++c) {
      CHECK(img.at(0, 0, c) == 0.5f);
      CHECK(img.at(63, 255, c) == 0.5f);
    }
    CHECK(*std::min_element(img.data().begin(), img.data().end()) < 0.05f);
    CHECK(img == render_content_image("test", {64, 256}));
    CHECK(kind_of([] { render_content_image("", {64, 256}); }) == ErrorKind::EmptyText);
  }

  TEST_CASE("composite identities") {
    const Image bg(4, 5, 3, 0.3f);
    GlyphLayer fg{Image(4, 5, 3, 1.0f), Image(4, 5, 1, 0.0f)};
    CHECK(composite(fg, bg) == bg);

    fg.color = Image(4, 5, 3, 0.7f);
    fg.alpha = Image(4, 5, 1, 1.0f);
    CHECK(composite(fg, bg) == fg.color);

    fg.color = Image(4, 5, 3, 1.0f);
    fg.alpha = Image(4, 5, 1, 0.5f);
    const Image half = composite(fg, Image(4, 5, 3, 0.0f));
    for (float v : half.data()) CHECK(v == 0.5f);

    CHECK_THROWS_AS(composite(fg, Image(4, 6, 3, 0.0f)), Error);
  }

  TEST_CASE("composite is a convex combination") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
      const Image bg = testing::random_image(rng, 6, 7, 3);
      const GlyphLayer fg{testing::random_image(rng, 6, 7, 3), testing::random_image(rng, 6, 7, 1)};
      const Image out = composite(fg, bg);
      for (std::size_t i = 0; i < out.size(); ++i) {
        const float a = fg.color.data()[i], b = bg.data()[i];
        REQUIRE(out.data()[i] >= std::min(a, b));
        REQUIRE(out.data()[i] <= std::max(a, b));
      }
    }
  }
}
