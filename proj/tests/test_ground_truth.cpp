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

#include <random>

#include "steforge/error.hpp"
#include "steforge/font.hpp"
#include "steforge/ground_truth.hpp"
#include "steforge/png_io.hpp"
#include "test_support.hpp"

using namespace steforge;

namespace {

const StbFontRasterizer& bundled() {
  static const StbFontRasterizer r(std::make_shared<const FontSet>(FontSet::load_dir(testing::asset_dir() / "fonts")));
  return r;
}

Image background() {
  static const Image bg = read_image(testing::asset_dir() / "backgrounds" / "bg_003.png");
  Image out(64, 256, 3);
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 256; ++x) {
      for (int c = 0; c < 3; ++c) out.at(y, x, c) = bg.at(y, x, c);
    }
  }
  return out;
}

TextStyle busy_style() {
  TextStyle s;
  s.font_id = 2;
  s.size = 34;
  s.fill_color = {0.95f, 0.9f, 0.2f};
  s.border = Border{{0.1f, 0.1f, 0.4f}, 2};
  s.shadow = Shadow{{2, 2}, {0.0f, 0.0f, 0.0f}, 0.5f};
  s.opacity = 0.85f;
  s.rotation = -5.0;
  s.curve_amplitude = 2.5;
  s.curve_period = 120.0;
  s.perspective_jitter = {Vec2{1, 0}, Vec2{0, 1.5}, Vec2{-1, 0}, Vec2{0.5, -1}};
  s.blur_sigma = 0.6;
  return s;
}

}  // namespace

TEST_SUITE("ground_truth") {
  TEST_CASE("extract_mask uses a strict threshold") {
    CHECK(extract_mask(Image(3, 4, 1, 0.0f)).count() == 0);
    CHECK(extract_mask(Image(3, 4, 1, 1.0f)).count() == 12);
    CHECK(extract_mask(Image(3, 4, 1, 0.5f), 0.5f).count() == 0);
    CHECK(extract_mask(Image(3, 4, 1, 0.5001f), 0.5f).count() == 12);
    CHECK_THROWS_AS(extract_mask(Image(3, 4, 3, 1.0f)), Error);
  }

  TEST_CASE("invert_mask") {
    Mask checker(4, 5);
    for (int y = 0; y < 4; ++y) {
      for (int x = 0; x < 5; ++x) checker.at(y, x) = static_cast<std::uint8_t>((x + y) % 2);
    }
    const Mask inv = invert_mask(checker);
    for (int y = 0; y < 4; ++y) {
      for (int x = 0; x < 5; ++x) CHECK(inv.at(y, x) == 1 - checker.at(y, x));
    }
    CHECK(invert_mask(inv) == checker);
    CHECK(invert_mask(Mask(3, 3, 1)) == Mask(3, 3, 0));
  }

  TEST_CASE("skeletonize: trivial cases") {
    Mask single(5, 5);
    single.at(2, 2) = 1;
    CHECK(skeletonize(single) == single);
    CHECK(skeletonize(Mask(6, 7)) == Mask(6, 7));
  }

  TEST_CASE("skeletonize: thick bar thins to its center line") {
    Mask bar(7, 24);
    for (int y = 2; y <= 4; ++y) {
      for (int x = 2; x <= 21; ++x) bar.at(y, x) = 1;
    }
    // Frozen from the reference thinning: the center row minus the end caps.
    Mask expected(7, 24);
    for (int x = 3; x <= 19; ++x) expected.at(3, x) = 1;
    CHECK(testing::reference_thinning(bar) == expected);
    CHECK(skeletonize(bar) == expected);
  }

  TEST_CASE("skeletonize: 2x2 blocks keep one pixel") {
    Mask block(6, 6);
    block.at(2, 2) = block.at(2, 3) = block.at(3, 2) = block.at(3, 3) = 1;
    const Mask sk = skeletonize(block);
    CHECK(sk.count() == 1);
    CHECK(sk.at(2, 2) == 1);
  }

  TEST_CASE("skeletonize agrees with the reference and is idempotent") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 60; ++trial) {
      const Mask m = testing::random_blob_mask(rng, 24 + trial % 9, 40 + trial % 13);
      const Mask sk = skeletonize(m);
      CHECK(sk == testing::reference_thinning(m));
      CHECK(skeletonize(sk) == sk);
      for (std::size_t i = 0; i < sk.size(); ++i) REQUIRE((!sk.data()[i] || m.data()[i]));
      CHECK(count_components(sk) == count_components(m));
    }
  }

  TEST_CASE("mask_multiply") {
    std::mt19937_64 rng(8);
    const Image img = testing::random_image(rng, 10, 12, 3);
    CHECK(mask_multiply(img, Mask(10, 12, 1)) == img);
    CHECK(mask_multiply(img, Mask(10, 12, 0)) == Image(10, 12, 3, 0.0f));

    Mask half(10, 12);
    for (int y = 0; y < 10; ++y) {
      for (int x = 0; x < 6; ++x) half.at(y, x) = 1;
    }
    const Image out = mask_multiply(Image(10, 12, 1, 0.8f), half);
    for (int y = 0; y < 10; ++y) {
      for (int x = 0; x < 12; ++x) CHECK(out.at(y, x) == (x < 6 ? 0.8f : 0.0f));
    }

    for (int trial = 0; trial < 20; ++trial) {
      const Mask m = testing::random_blob_mask(rng, 10, 12);
      const Image a = mask_multiply(img, m);
      const Image b = mask_multiply(img, invert_mask(m));
      for (std::size_t i = 0; i < img.size(); ++i) REQUIRE(a.data()[i] + b.data()[i] == img.data()[i]);
    }
    CHECK_THROWS_AS(mask_multiply(img, Mask(10, 11)), Error);
  }

  TEST_CASE("assemble_sample: zero opacity leaves the background untouched") {
    TextStyle s = busy_style();
    s.opacity = 0.0f;
    const Image bg = background();
    const AssembledSample a = assemble_sample(bg, s, "Stone", "River", bundled());
    CHECK(a.tuple.i_s == bg);
    CHECK(a.tuple.t_f == bg);
    CHECK(a.tuple.t_b == bg);
    CHECK(a.tuple.mask_s.count() == 0);
    CHECK(a.tuple.mask_t.count() == 0);
    CHECK(a.tuple.t_sk.count() == 0);
  }

  TEST_CASE("assemble_sample: same word gives identical renders") {
    const AssembledSample a = assemble_sample(background(), busy_style(), "Lantern", "Lantern", bundled());
    CHECK(a.tuple.i_s == a.tuple.t_f);
    CHECK(a.tuple.mask_s == a.tuple.mask_t);
  }

  TEST_CASE("assemble_sample: layers reconstruct and satisfy the tuple invariants") {
    const Image bg = background();
    const AssembledSample a = assemble_sample(bg, busy_style(), "Harbor", "glimpse", bundled());
    const SampleTuple& t = a.tuple;
    CHECK(validate_tuple(t).empty());
    CHECK(composite(a.target_layer, t.t_b) == t.t_f);
    CHECK(composite(a.source_layer, t.t_b) == t.i_s);
    CHECK(t.t_b == bg);
    CHECK(t.i_t == render_content_image("glimpse", {64, 256}));
    CHECK(t.mask_t.count() > 0);
    CHECK(t.t_sk.count() > 0);
    CHECK(t.t_sk.count() < t.mask_t.count());
    CHECK(t.word_source == "Harbor");
    CHECK(t.word_target == "glimpse");
  }
}
