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
 * @file geometry.hpp
 * @brief Geometric augmentations applied identically to color and alpha.
 *
 * Coordinates refer to pixel centers: pixel (x, y) sits at (x, y), so the
 * canvas corners are (0,0), (W-1,0), (W-1,H-1), (0,H-1). Sampling is bilinear;
 * reads outside the canvas return 0 for alpha and the nearest edge value for
 * color.
 */

#pragma once

#include <array>

#include "steforge/data_model.hpp"
#include "steforge/image.hpp"
#include "steforge/text_render.hpp"

namespace steforge {

/// Widest rotation accepted by rotate().
inline constexpr double kMaxRotationDegrees = 180.0;

/// 3x3 row-major projective transform.
using Homography = std::array<double, 9>;

/// Rotation about the canvas center. Throws AngleOutOfRange if |degrees| > 180.
GlyphLayer rotate(const GlyphLayer& layer, double degrees);

/// Maps canvas corners (TL, TR, BR, BL) to corner + offset.
/// Throws OffsetOutOfRange if any |offset| > 0.2 * min(H, W), and
/// DegenerateHomography if three target corners are collinear.
GlyphLayer perspective_warp(const GlyphLayer& layer, const std::array<Vec2, 4>& corner_offsets);

/// Solves for H with H * src[i] ~ dst[i]. Throws DegenerateHomography.
Homography homography_from_corners(const std::array<Vec2, 4>& src, const std::array<Vec2, 4>& dst);

/// Separable Gaussian, radius ceil(3 sigma), clamp-to-edge. sigma == 0 returns
/// the input unchanged. Throws NegativeSigma.
Image gaussian_blur(const Image& img, double sigma);

/// Blurs color and alpha with the same kernel.
GlyphLayer gaussian_blur(const GlyphLayer& layer, double sigma);

/// Rotation, perspective, then blur as configured by the style. Identity
/// settings leave the layer untouched.
GlyphLayer apply_style_geometry(const GlyphLayer& layer, const TextStyle& style);

}  // namespace steforge
