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
 * @file generator.hpp
 * @brief Dataset sampling, generation and read-back.
 *
 * On-disk layout of a generated dataset:
 *
 *   <out>/i_s/00000000.png  ... one directory per layer (8 total)
 *   <out>/labels.txt        "<%08d>\t<word_source>\t<word_target>\n"
 *   <out>/manifest.json     written last; its presence marks a complete run
 *
 * Sample i is a pure function of (config, i): its RNG key is
 * sample_seed(master_seed, i, retry). The output tree is byte-identical for
 * any worker count.
 */

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "steforge/charset.hpp"
#include "steforge/data_model.hpp"
#include "steforge/font.hpp"
#include "steforge/ground_truth.hpp"
#include "steforge/image.hpp"

namespace steforge {

inline constexpr std::string_view kGeneratorVersion = "ste-forge 1.0.0";
/// Attempts per sample after the first failure before it is recorded as skipped.
inline constexpr int kMaxRetries = 5;

/// Image layer directory names, in the order they are written.
inline constexpr std::array<std::string_view, 5> kImageLayers{"i_s", "i_t", "t_f", "t_b", "t_fg"};
inline constexpr std::array<std::string_view, 3> kMaskLayers{"mask_s", "mask_t", "t_sk"};

struct StyleDraw {
  TextStyle style;
  std::size_t background_index = 0;
  // Top-left corner of the crop window as a fraction of the free margin.
  double crop_x = 0.0;
  double crop_y = 0.0;
  std::string word_source;
  std::string word_target;
};

/// Draws every random choice of one sample from a CounterRng keyed by `seed`.
/// Throws EmptyFontSet, EmptyBackgroundSet, EmptyLexicon.
StyleDraw sample_style(std::uint64_t seed, const GenConfig& config, std::size_t font_count,
                       std::size_t background_count, std::span<const std::string> lexicon);

/// Fonts, backgrounds and words loaded once and shared read-only by workers.
struct GeneratorResources {
  std::shared_ptr<const FontSet> fonts;
  std::vector<Image> backgrounds;
  std::vector<std::string> lexicon;
  Charset charset = Charset::letters();

  /// Lexicon lines are trimmed; words with characters outside the charset are
  /// dropped. Throws Io, EmptyFontSet, EmptyBackgroundSet, EmptyLexicon.
  static GeneratorResources load(const GenConfig& config);
};

/// Center-crops or resizes `bg` to `canvas`. Larger backgrounds are cropped at
/// the fractional offset (crop_x, crop_y); smaller ones are resized bilinearly.
Image fit_background(const Image& bg, Dims canvas, double crop_x, double crop_y);

struct DatasetManifest {
  std::size_t count = 0;
  Dims canvas{64, 256};
  std::uint64_t master_seed = 0;
  std::string charset;
  std::string generator_version{kGeneratorVersion};
  // Requested indices that failed every retry. Present in the JSON only when
  // non-empty. Written samples are numbered contiguously regardless.
  std::vector<std::size_t> skipped;

  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

std::string manifest_to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(std::string_view text);

/// One fully assembled sample together with the draw that produced it.
struct BuiltSample {
  AssembledSample sample;
  StyleDraw draw;
  int retry = 0;  // number of failed attempts before this one
};

/// Builds sample `index` in memory exactly as generate_dataset would, retrying
/// with fresh seeds up to kMaxRetries times. Returns nullopt if every attempt
/// fails to render.
std::optional<BuiltSample> build_sample(const GenConfig& config, const GeneratorResources& resources,
                                        std::size_t index, const FontRasterizer& rasterizer);

struct GenerateOptions {
  unsigned threads = 1;
  // Called from worker threads with the number of finished samples.
  std::function<void(std::size_t done, std::size_t total)> progress;
};

/// Generates `count` samples under `out_dir`. Throws Error(Io) for filesystem
/// failures; per-sample render failures are retried and then skipped.
DatasetManifest generate_dataset(const GenConfig& config, std::size_t count, const std::filesystem::path& out_dir,
                                 const GenerateOptions& options = {});

/// Same, with resources already loaded.
DatasetManifest generate_dataset(const GenConfig& config, const GeneratorResources& resources, std::size_t count,
                                 const std::filesystem::path& out_dir, const GenerateOptions& options = {});

DatasetManifest read_manifest(const std::filesystem::path& dataset_dir);

/// Loads sample `index`. Throws IndexOutOfRange, CorruptSample.
SampleTuple read_sample(const std::filesystem::path& dataset_dir, std::size_t index);

/// Zero-padded file stem, e.g. 7 -> "00000007".
std::string sample_stem(std::size_t index);

}  // namespace steforge
