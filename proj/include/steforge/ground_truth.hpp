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

#include "steforge/data_model.hpp"
#include "steforge/font.hpp"
#include "steforge/image.hpp"
#include "steforge/text_render.hpp"

namespace steforge {

inline constexpr float kDefaultMaskThreshold = 0.5f;

/// Stroke masks inside a SampleTuple mark every pixel the text touches
/// (alpha > 0), which makes i_s and t_f agree exactly outside the mask union.
inline constexpr float kStrokeCoverageThreshold = 0.0f;

/// 1 where alpha > threshold (strict). `alpha` must be single-channel.
Mask extract_mask(const Image& alpha, float threshold = kDefaultMaskThreshold);

Mask invert_mask(const Mask& mask);

/// Zhang-Suen thinning (8-connectivity) iterated to a fixpoint.
Mask skeletonize(const Mask& mask);

/// img * mask, broadcast over channels. Throws DimMismatch.
Image mask_multiply(const Image& img, const Mask& mask);

/// Number of 8-connected components.
int count_components(const Mask& mask);

/// A tuple together with the styled glyph layers it was composited from.
struct AssembledSample {
  SampleTuple tuple;
  GlyphLayer source_layer;
  GlyphLayer target_layer;
};

/// Builds the full ground-truth tuple for one (background, style, word pair).
/// Render errors propagate.
AssembledSample assemble_sample(const Image& background, const TextStyle& style, std::string_view word_source,
                                std::string_view word_target, const FontRasterizer& rasterizer,
                                const Charset& charset = Charset::letters_digits());

}  // namespace steforge
