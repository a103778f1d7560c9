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

#include <cmath>
#include <numbers>
#include <random>

#include "steforge/error.hpp"
#include "steforge/geometry.hpp"
#include "steforge/ground_truth.hpp"
#include "steforge/text_render.hpp"
#include "test_support.hpp"

using namespace steforge;

namespace {

GlyphLayer impulse_layer(int h, int w, int y, int x) {
  GlyphLayer g{Image(h, w, 3, 0.0f), Image(h, w, 1, 0.0f)};
  g.alpha.at(y, x) = 1.0f;
  for (int c = 0; c < 3; ++c) g.color.at(y, x, c) = 1.0f;
  return g;
}

struct Centroid {
  double x = 0.0, y = 0.0, mass = 0.0;
};

Centroid centroid(const Image& alpha) {
  Centroid c;
  for (int y = 0; y < alpha.height(); ++y) {
    for (int x = 0; x < alpha.width(); ++x) {
      const double v = alpha.at(y, x);
      c.mass += v;
      c.x += v * x;
      c.y += v * y;
    }
  }
  c.x /= c.mass;
  c.y /= c.mass;
  return c;
}

GlyphLayer sample_text_layer() {
  TextStyle s;
  s.fill_color = {0.8f, 0.3f, 0.1f};
  return rasterize_text("Warp", s, {64, 256}, standard_rasterizer());
}

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

TEST_SUITE("geometry") {
  TEST_CASE("rotation by zero is the identity") {
    const GlyphLayer g = sample_text_layer();
    CHECK(rotate(g, 0.0) == g);
  }

  TEST_CASE("double half-turn returns the original") {
    const GlyphLayer g = sample_text_layer();
    const GlyphLayer back = rotate(rotate(g, 180.0), 180.0);
    double worst = 0.0;
    auto track = [&worst](const Image& a, const Image& b) {
      for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, double(std::abs(a.data()[i] - b.data()[i])));
    };
    track(back.alpha, g.alpha);
    track(back.color, g.color);
    CHECK(worst <= 0.02);
  }

  TEST_CASE("quarter turn keeps a centered impulse centered") {
    // Odd sizes so that one pixel sits exactly on the rotation center.
    for (auto [h, w] : {std::pair{65, 65}, std::pair{63, 255}, std::pair{33, 97}}) {
      const int cy = h / 2, cx = w / 2;
      const Centroid before = centroid(impulse_layer(h, w, cy, cx).alpha);
      const Centroid after = centroid(rotate(impulse_layer(h, w, cy, cx), 90.0).alpha);
      CHECK(std::hypot(after.x - before.x, after.y - before.y) < 1.0);
    }
  }

  TEST_CASE("rotation preserves dims and rejects wild angles") {
    const GlyphLayer g = sample_text_layer();
    CHECK(rotate(g, 17.0).dims() == g.dims());
    CHECK(kind_of([&] { rotate(g, 181.0); }) == ErrorKind::AngleOutOfRange);
    CHECK(kind_of([&] { rotate(g, -200.0); }) == ErrorKind::AngleOutOfRange);
  }

  TEST_CASE("perspective: zero offsets are the identity") {
    const GlyphLayer g = sample_text_layer();
    CHECK(perspective_warp(g, {}) == g);
  }

  TEST_CASE("perspective: corner impulse follows its corner") {
    const GlyphLayer g = impulse_layer(64, 256, 0, 0);
    std::array<Vec2, 4> offsets{};
    offsets[0] = {2.0, 0.0};
    const GlyphLayer out = perspective_warp(g, offsets);
    const Centroid c = centroid(out.alpha);
    CHECK(c.x == doctest::Approx(2.0).epsilon(0.1));
    CHECK(std::abs(c.y) < 0.25);
  }

  TEST_CASE("perspective: degenerate and oversized offsets") {
    const GlyphLayer g = sample_text_layer();
    std::array<Vec2, 4> collinear{};
    // Top-right lands on the diagonal between top-left and bottom-right.
    collinear[1] = {127.5 - 255.0, 31.5};
    CHECK(kind_of([&] { perspective_warp(g, collinear); }) == ErrorKind::DegenerateHomography);

    std::array<Vec2, 4> far{};
    far[2] = {0.0, 13.0};  // 0.2 * 64 = 12.8
    CHECK(kind_of([&] { perspective_warp(g, far); }) == ErrorKind::OffsetOutOfRange);
    far[2] = {0.0, 12.8};
    CHECK(perspective_warp(g, far).dims() == g.dims());
  }

  TEST_CASE("homography maps the four corners") {
    const std::array<Vec2, 4> src{Vec2{0, 0}, Vec2{10, 0}, Vec2{10, 5}, Vec2{0, 5}};
    const std::array<Vec2, 4> dst{Vec2{1, 0.5}, Vec2{9, -0.5}, Vec2{11, 6}, Vec2{-1, 4}};
    const Homography h = homography_from_corners(src, dst);
    for (int i = 0; i < 4; ++i) {
      const double w = h[6] * src[i].x + h[7] * src[i].y + h[8];
      CHECK((h[0] * src[i].x + h[1] * src[i].y + h[2]) / w == doctest::Approx(dst[i].x).epsilon(1e-9));
      CHECK((h[3] * src[i].x + h[4] * src[i].y + h[5]) / w == doctest::Approx(dst[i].y).epsilon(1e-9));
    }
  }

  TEST_CASE("blur: identity, constants, impulse peak") {
    std::mt19937_64 rng(5);
    const Image noise = testing::random_image(rng, 20, 30, 3);
    CHECK(gaussian_blur(noise, 0.0) == noise);
    CHECK(kind_of([&] { gaussian_blur(noise, -0.5); }) == ErrorKind::NegativeSigma);

    const Image flat(20, 30, 3, 0.37f);
    for (double sigma : {0.5, 1.0, 2.5}) {
      const Image out = gaussian_blur(flat, sigma);
      for (float v : out.data()) CHECK(v == doctest::Approx(0.37f).epsilon(1e-6));
    }

    // Oracle: the normalized, truncated (radius ceil(3 sigma)) 1-D kernel
    // evaluated directly; the 2-D peak is its center tap squared.
    double norm = 0.0;
    for (int i = -3; i <= 3; ++i) norm += std::exp(-0.5 * i * i);
    const double oracle_peak = 1.0 / (norm * norm);
    Image impulse(21, 21, 1, 0.0f);
    impulse.at(10, 10) = 1.0f;
    const Image out = gaussian_blur(impulse, 1.0);
    CHECK(out.at(10, 10) == doctest::Approx(oracle_peak).epsilon(1e-6));
    CHECK(std::abs(out.at(10, 10) - 1.0 / (2.0 * std::numbers::pi)) < 1e-4);

    double total = 0.0;
    for (float v : out.data()) total += v;
    CHECK(std::abs(total - 1.0) < 1e-6);
  }

  TEST_CASE("ops preserve dims") {
    const GlyphLayer g = sample_text_layer();
    TextStyle s;
    s.rotation = 7.0;
    s.perspective_jitter = {Vec2{1, 1}, Vec2{-2, 0}, Vec2{0, 2}, Vec2{1, -1}};
    s.blur_sigma = 0.8;
    CHECK(apply_style_geometry(g, s).dims() == g.dims());
    CHECK(gaussian_blur(g, 1.3).dims() == g.dims());
  }

  TEST_CASE("binary alpha: warp and mask extraction commute") {
    GlyphLayer g = sample_text_layer();
    g.alpha = mask_to_image(extract_mask(g.alpha, 0.5f));
    const std::array<Vec2, 4> offsets{Vec2{2, 1}, Vec2{-1, 2}, Vec2{1.5, -2}, Vec2{0, 1}};
    const Mask warped_then_extracted = extract_mask(perspective_warp(g, offsets).alpha, 0.5f);
    GlyphLayer from_mask{g.color, mask_to_image(extract_mask(g.alpha, 0.5f))};
    const Mask extracted_then_warped = extract_mask(perspective_warp(from_mask, offsets).alpha, 0.5f);
    CHECK(warped_then_extracted == extracted_then_warped);
    CHECK(extract_mask(rotate(g, 11.0).alpha, 0.5f) == extract_mask(rotate(from_mask, 11.0).alpha, 0.5f));
  }
}
