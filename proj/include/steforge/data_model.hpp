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

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "steforge/image.hpp"

namespace steforge {

using Rgb = std::array<float, 3>;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct Border {
  Rgb color{0.0f, 0.0f, 0.0f};
  int width = 1;
  friend bool operator==(const Border&, const Border&) = default;
};

struct Shadow {
  std::array<int, 2> offset{2, 2};  // (dx, dy) in pixels
  Rgb color{0.0f, 0.0f, 0.0f};
  float alpha = 0.5f;
  friend bool operator==(const Shadow&, const Shadow&) = default;
};

/// Full parameterization of one styled text rendering.
struct TextStyle {
  int font_id = 0;
  int size = 40;  // pixel height of the ascent-descent box
  Rgb fill_color{0.0f, 0.0f, 0.0f};
  std::optional<Border> border;
  std::optional<Shadow> shadow;
  float opacity = 1.0f;
  double rotation = 0.0;         // degrees, about the canvas center
  double curve_amplitude = 0.0;  // pixels
  double curve_period = 0.0;     // pixels
  // Displacement of the canvas corners (TL, TR, BR, BL) for the perspective pass.
  std::array<Vec2, 4> perspective_jitter{};
  double blur_sigma = 0.0;

  friend bool operator==(const TextStyle&, const TextStyle&) = default;
};

/// Throws Error(InvalidArgument) if the style breaks its invariants.
void validate_style(const TextStyle& style);

/// The seven rasters (plus the source stroke mask) that make up one paired sample.
struct SampleTuple {
  Image i_s;   // styled source text on background
  Image i_t;   // target text in the standard format
  Image t_f;   // styled target text on the same background
  Image t_b;   // clean background
  Image t_fg;  // styled target text on neutral gray
  Mask t_sk;   // skeleton of the target stroke mask
  Mask mask_t;
  Mask mask_s;
  std::string word_source;
  std::string word_target;

  friend bool operator==(const SampleTuple&, const SampleTuple&) = default;
};

/// Names of violated invariants, in a fixed order. Empty iff the tuple is valid.
///   "dims_consistent"    all rasters share height and width
///   "channels"           image layers are 3-channel
///   "skeleton_subset"    every t_sk pixel is set in mask_t
///   "clean_background"   i_s == t_f outside mask_s | mask_t
std::vector<std::string> validate_tuple(const SampleTuple& sample);

/// Generation parameters. Config file keys mirror these field names.
struct GenConfig {
  Dims canvas{64, 256};
  std::filesystem::path font_dir;
  std::filesystem::path background_dir;
  std::filesystem::path lexicon;
  std::array<double, 2> opacity_range{0.7, 1.0};
  std::array<double, 2> rotation_range{-8.0, 8.0};  // degrees
  double curve_probability = 0.25;
  double blur_probability = 0.2;
  std::uint64_t master_seed = 0;

  // Sampling knobs beyond the core fields above.
  std::array<double, 2> size_range{0.45, 0.8};  // fraction of canvas height
  std::array<double, 2> blur_sigma_range{0.3, 1.0};
  double border_probability = 0.3;
  double shadow_probability = 0.2;
  double perspective_max = 3.0;      // pixels of corner displacement
  double curve_amplitude_max = 4.0;  // pixels
  bool include_digits = false;       // 62-character charset instead of 52
};

/// Throws Error(Config) if ranges are inverted or out of their domains.
void validate_config(const GenConfig& config);

}  // namespace steforge
