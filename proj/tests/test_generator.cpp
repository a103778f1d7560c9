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
#include <fstream>
#include <sstream>

#include "steforge/config.hpp"
#include "steforge/error.hpp"
#include "steforge/generator.hpp"
#include "steforge/png_io.hpp"
#include "steforge/rng.hpp"
#include "test_support.hpp"

using namespace steforge;
namespace fs = std::filesystem;

namespace {

const GeneratorResources& resources() {
  static const GeneratorResources r = GeneratorResources::load(testing::asset_config());
  return r;
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

std::size_t files_in(const fs::path& dir) {
  return static_cast<std::size_t>(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}));
}

}  // namespace

TEST_SUITE("generator") {
  TEST_CASE("counter RNG is keyed and reproducible") {
    CHECK(sample_seed(7, 3) == sample_seed(7, 3));
    CHECK(sample_seed(7, 3) != sample_seed(7, 4));
    CHECK(sample_seed(7, 3) != sample_seed(8, 3));
    CHECK(sample_seed(7, 3, 1) != sample_seed(7, 3, 0));
    CounterRng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    CounterRng r(1);
    for (int i = 0; i < 10000; ++i) {
      const double u = r.uniform();
      REQUIRE(u >= 0.0);
      REQUIRE(u < 1.0);
      REQUIRE(r.below(7) < 7u);
    }
  }

  TEST_CASE("sample_style is deterministic") {
    const GenConfig c = testing::asset_config(9);
    const auto& res = resources();
    for (std::uint64_t i = 0; i < 50; ++i) {
      const auto seed = sample_seed(c.master_seed, i);
      const StyleDraw a = sample_style(seed, c, res.fonts->size(), res.backgrounds.size(), res.lexicon);
      const StyleDraw b = sample_style(seed, c, res.fonts->size(), res.backgrounds.size(), res.lexicon);
      CHECK(a.style == b.style);
      CHECK(a.word_source == b.word_source);
      CHECK(a.word_target == b.word_target);
      CHECK(a.background_index == b.background_index);
      CHECK(res.charset.accepts(a.word_source));
      CHECK(res.charset.accepts(a.word_target));
      CHECK_NOTHROW(validate_style(a.style));
    }
  }

  TEST_CASE("sample_style honours the opacity range") {
    GenConfig c = testing::asset_config();
    const auto& res = resources();
    c.opacity_range = {1.0, 1.0};
    for (std::uint64_t i = 0; i < 200; ++i) {
      CHECK(sample_style(sample_seed(0, i), c, 3, 24, res.lexicon).style.opacity == 1.0f);
    }
    c.opacity_range = {0.5, 1.0};
    float lo = 2.0f, hi = -1.0f;
    for (std::uint64_t i = 0; i < 10000; ++i) {
      const float o = sample_style(sample_seed(1, i), c, 3, 24, res.lexicon).style.opacity;
      lo = std::min(lo, o);
      hi = std::max(hi, o);
    }
    CHECK(lo >= 0.5f);
    CHECK(hi <= 1.0f);
    CHECK(hi - lo > 0.45f);
  }

  TEST_CASE("sample_style rejects empty resources") {
    const GenConfig c = testing::asset_config();
    const std::vector<std::string> words{"word"};
    CHECK(kind_of([&] { sample_style(1, c, 0, 1, words); }) == ErrorKind::EmptyFontSet);
    CHECK(kind_of([&] { sample_style(1, c, 1, 0, words); }) == ErrorKind::EmptyBackgroundSet);
    CHECK(kind_of([&] { sample_style(1, c, 1, 1, {}); }) == ErrorKind::EmptyLexicon);
  }

  TEST_CASE("count 0 writes a valid empty dataset") {
    testing::TempDir dir("gen0");
    const fs::path out = dir / "ds";
    const DatasetManifest m = generate_dataset(testing::asset_config(), 0, out);
    CHECK(m.count == 0);
    CHECK(read_manifest(out).count == 0);
    CHECK(fs::exists(out / "labels.txt"));
    CHECK(testing::slurp(out / "labels.txt").empty());
    CHECK(kind_of([&] { read_sample(out, 0); }) == ErrorKind::IndexOutOfRange);
  }

  TEST_CASE("16 samples: layout, labels, masks and thread independence") {
    testing::TempDir dir("gen16");
    const GenConfig c = testing::asset_config(7);
    GenerateOptions one, eight;
    one.threads = 1;
    eight.threads = 8;
    const DatasetManifest m1 = generate_dataset(c, 16, dir / "a", one);
    const DatasetManifest m8 = generate_dataset(c, 16, dir / "b", eight);
    CHECK(m1 == m8);
    CHECK(m1.count == 16);
    CHECK(m1.skipped.empty());
    CHECK(testing::tree_contents(dir / "a") == testing::tree_contents(dir / "b"));

    for (auto layer : kImageLayers) CHECK(files_in(dir / "a" / std::string(layer)) == 16);
    for (auto layer : kMaskLayers) {
      CHECK(files_in(dir / "a" / std::string(layer)) == 16);
      for (const auto& e : fs::directory_iterator(dir / "a" / std::string(layer))) {
        const ByteRaster r = read_png(e.path());
        CHECK(r.channels == 1);
        CHECK(std::all_of(r.data.begin(), r.data.end(), [](std::uint8_t v) { return v == 0 || v == 255; }));
      }
    }

    std::istringstream labels(testing::slurp(dir / "a" / "labels.txt"));
    std::string line;
    int n = 0;
    const Charset charset = Charset::letters();
    while (std::getline(labels, line)) {
      const auto t1 = line.find('\t'), t2 = line.rfind('\t');
      REQUIRE(t1 != std::string::npos);
      REQUIRE(t2 != t1);
      CHECK(line.substr(0, t1) == sample_stem(static_cast<std::size_t>(n)));
      CHECK(charset.accepts(line.substr(t1 + 1, t2 - t1 - 1)));
      CHECK(charset.accepts(line.substr(t2 + 1)));
      ++n;
    }
    CHECK(n == 16);
  }

  TEST_CASE("read_sample round-trips and reports damage") {
    testing::TempDir dir("genrt");
    const fs::path out = dir / "ds";
    generate_dataset(testing::asset_config(3), 4, out);
    for (std::size_t i = 0; i < 4; ++i) {
      const SampleTuple t = read_sample(out, i);
      CHECK(validate_tuple(t).empty());
      const std::string file = sample_stem(i) + ".png";
      CHECK(to_bytes(t.i_s) == read_png(out / "i_s" / file));
      CHECK(to_bytes(t.t_fg) == read_png(out / "t_fg" / file));
      CHECK(mask_to_bytes(t.t_sk) == read_png(out / "t_sk" / file));
    }
    CHECK(kind_of([&] { read_sample(out, 4); }) == ErrorKind::IndexOutOfRange);

    fs::remove(out / "t_sk" / (sample_stem(2) + ".png"));
    try {
      read_sample(out, 2);
      FAIL("missing layer not detected");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::CorruptSample);
      CHECK(std::string(e.what()).find("t_sk") != std::string::npos);
    }
  }

  TEST_CASE("output directory policy") {
    testing::TempDir dir("genout");
    std::ofstream(dir / "stray.txt") << "x";
    CHECK(kind_of([&] { generate_dataset(testing::asset_config(), 1, dir.path()); }) == ErrorKind::Io);

    // Regenerating over an existing dataset replaces it.
    const fs::path out = dir / "ds";
    generate_dataset(testing::asset_config(1), 3, out);
    generate_dataset(testing::asset_config(1), 2, out);
    CHECK(read_manifest(out).count == 2);
    CHECK(files_in(out / "i_s") == 2);
  }

  TEST_CASE("manifest json round trip") {
    DatasetManifest m;
    m.count = 5;
    m.master_seed = 0xFFFFFFFFFFFFFFFFull;
    m.charset = Charset::letters().chars();
    CHECK(manifest_from_json(manifest_to_json(m)) == m);
    CHECK(manifest_to_json(m).find("skipped") == std::string::npos);
    m.skipped = {3};
    CHECK(manifest_from_json(manifest_to_json(m)) == m);
    CHECK(kind_of([] { manifest_from_json("{not json"); }) == ErrorKind::CorruptSample);
  }

  TEST_CASE("config parsing") {
    const std::string text =
        "# comment\n"
        "canvas = [32, 128]\n"
        "font_dir = \"fonts\"   # trailing comment\n"
        "background_dir = \"/abs/bg\"\n"
        "lexicon = \"words.txt\"\n"
        "opacity_range = [0.5, 0.9]\n"
        "rotation_range = [-3, 3]\n"
        "curve_probability = 0.1\n"
        "blur_probability = 0\n"
        "master_seed = 18446744073709551615\n"
        "include_digits = true\n";
    const GenConfig c = parse_config(text, "/base");
    CHECK(c.canvas == Dims{32, 128});
    CHECK(c.font_dir == fs::path("/base/fonts"));
    CHECK(c.background_dir == fs::path("/abs/bg"));
    CHECK(c.opacity_range == std::array<double, 2>{0.5, 0.9});
    CHECK(c.master_seed == 18446744073709551615ull);
    CHECK(c.include_digits);

    CHECK(kind_of([] { parse_config("bogus = 1\n", "."); }) == ErrorKind::Config);
    CHECK(kind_of([] { parse_config("opacity_range = [0.9, 0.1]\n", "."); }) == ErrorKind::Config);
    CHECK(kind_of([] { parse_config("canvas = 64\n", "."); }) == ErrorKind::Config);
    CHECK(kind_of([] { parse_config("no equals sign\n", "."); }) == ErrorKind::Config);
    CHECK(kind_of([] { load_config("/nonexistent/x.toml"); }) == ErrorKind::Config);

    const GenConfig shipped = load_config(fs::path(STE_FORGE_SOURCE_DIR) / "configs" / "default.toml");
    CHECK(fs::exists(shipped.font_dir));
    CHECK(fs::exists(shipped.lexicon));
  }
}
