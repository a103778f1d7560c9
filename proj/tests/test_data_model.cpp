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
#include <random>

#include "steforge/charset.hpp"
#include "steforge/data_model.hpp"
#include "steforge/error.hpp"
#include "steforge/image.hpp"
#include "test_support.hpp"

using namespace steforge;

namespace {

SampleTuple blank_tuple(int h = 8, int w = 16) {
  SampleTuple s;
  s.i_s = s.i_t = s.t_f = s.t_b = s.t_fg = Image(h, w, 3, 0.25f);
  s.t_sk = s.mask_t = s.mask_s = Mask(h, w);
  s.word_source = "ab";
  s.word_target = "cd";
  return s;
}

}  // namespace

TEST_SUITE("data_model") {
  TEST_CASE("image construction validates shape and range") {
    CHECK_NOTHROW(Image(2, 2, 3, std::vector<float>(12, 0.5f)));
    CHECK_THROWS_AS(Image(2, 2, 3, std::vector<float>(11, 0.5f)), Error);
    CHECK_THROWS_AS(Image(1, 1, 1, std::vector<float>{1.5f}), Error);
    CHECK_THROWS_AS(Image(1, 1, 1, std::vector<float>{-0.1f}), Error);
    CHECK_THROWS_AS(Image(1, 1, 2, std::vector<float>{0.0f, 0.0f}), Error);
    CHECK_THROWS_AS(Mask(1, 2, std::vector<std::uint8_t>{0, 2}), Error);

    try {
      Image(1, 1, 1, std::vector<float>{std::nanf("")});
      FAIL("NaN accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidImage);
    }
  }

  TEST_CASE("quantization boundaries and round-half-up") {
    CHECK(quantize(1.0f) == 255);
    CHECK(quantize(0.0f) == 0);
    CHECK(quantize(0.5f) == 128);
    const Image back = from_bytes(to_bytes(Image(1, 1, 1, 0.5f)));
    CHECK(back.at(0, 0) == doctest::Approx(128.0 / 255.0).epsilon(1e-7));
  }

  TEST_CASE("byte round trip stays within half a quantization step") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const Image img = testing::random_image(rng, 9, 13, trial % 2 ? 3 : 1);
      const Image back = from_bytes(to_bytes(img));
      REQUIRE(back.dims() == img.dims());
      REQUIRE(back.channels() == img.channels());
      double worst = 0.0;
      for (std::size_t i = 0; i < img.size(); ++i) {
        worst = std::max(worst, std::abs(double(back.data()[i]) - img.data()[i]));
      }
      CHECK(worst <= 1.0 / 510.0 + 1e-7);
    }
  }

  TEST_CASE("mask byte encoding is strictly 0/255") {
    Mask m(2, 2, std::vector<std::uint8_t>{0, 1, 1, 0});
    const ByteRaster r = mask_to_bytes(m);
    CHECK(r.data == std::vector<std::uint8_t>{0, 255, 255, 0});
    CHECK(mask_from_bytes(r) == m);
    ByteRaster bad = r;
    bad.data[0] = 7;
    CHECK_THROWS_AS(mask_from_bytes(bad), Error);
  }

  TEST_CASE("validate_tuple reports named violations") {
    SampleTuple s = blank_tuple();
    CHECK(validate_tuple(s).empty());

    SampleTuple sk = s;
    sk.t_sk.at(3, 3) = 1;
    CHECK(validate_tuple(sk) == std::vector<std::string>{"skeleton_subset"});
    sk.mask_t.at(3, 3) = 1;
    CHECK(validate_tuple(sk).empty());

    SampleTuple dims = s;
    dims.t_b = Image(8, 15, 3, 0.25f);
    CHECK(validate_tuple(dims) == std::vector<std::string>{"dims_consistent"});

    SampleTuple bg = s;
    bg.t_f.at(1, 1, 2) = 0.9f;
    CHECK(validate_tuple(bg) == std::vector<std::string>{"clean_background"});
    bg.mask_s.at(1, 1) = 1;
    CHECK(validate_tuple(bg).empty());
  }

  TEST_CASE("validate_tuple is pure") {
    SampleTuple s = blank_tuple();
    s.t_sk.at(0, 0) = 1;
    s.t_f.at(2, 2, 0) = 1.0f;
    const auto first = validate_tuple(s);
    for (int i = 0; i < 5; ++i) CHECK(validate_tuple(s) == first);
  }

  TEST_CASE("style validation") {
    TextStyle ok;
    CHECK_NOTHROW(validate_style(ok));
    TextStyle bad = ok;
    bad.opacity = 1.5f;
    CHECK_THROWS_AS(validate_style(bad), Error);
    bad = ok;
    bad.size = 0;
    CHECK_THROWS_AS(validate_style(bad), Error);
    bad = ok;
    bad.curve_amplitude = 3.0;
    bad.curve_period = 0.0;
    CHECK_THROWS_AS(validate_style(bad), Error);
    bad.curve_period = 40.0;
    CHECK_NOTHROW(validate_style(bad));
  }

  TEST_CASE("config validation") {
    GenConfig c = testing::asset_config();
    CHECK_NOTHROW(validate_config(c));
    GenConfig bad = c;
    bad.opacity_range = {0.9, 0.2};
    CHECK_THROWS_AS(validate_config(bad), Error);
    bad = c;
    bad.rotation_range = {-60.0, 0.0};
    CHECK_THROWS_AS(validate_config(bad), Error);
    bad = c;
    bad.curve_probability = 1.2;
    CHECK_THROWS_AS(validate_config(bad), Error);
    bad = c;
    bad.canvas = {4, 256};
    CHECK_THROWS_AS(validate_config(bad), Error);
  }

  TEST_CASE("charsets") {
    CHECK(Charset::letters().size() == 52);
    CHECK(Charset::letters_digits().size() == 62);
    CHECK(Charset::letters().accepts("HelloWorld"));
    CHECK_FALSE(Charset::letters().accepts("abc1"));
    CHECK(Charset::letters_digits().accepts("abc1"));
    CHECK(Charset::letters().index_of('a') == 0u);
    CHECK(Charset::letters().index_of('A') == 26u);
    CHECK_THROWS_AS(Charset(""), Error);
    CHECK_THROWS_AS(Charset("abca"), Error);
  }
}
