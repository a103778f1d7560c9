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
 * @file losses.hpp
 * @brief Forward-only reference values for the editing model's training losses.
 *
 * These are oracles for external trainers: plain functions over rasters and
 * arrays, no gradients. The totals combine as
 *
 *   L_ts  = lambda_ts1 * L_ts_fg + L_ts_sk + L_ts_gan
 *   L_f   = lambda_f1 * L_f_l2 + L_f_gan
 *   L_vgg = lambda_v1 * L_per + lambda_v2 * L_style
 *   L     = L_b_i + L_ts + L_f + lambda_1 * L_vgg + lambda_2 * L_rec
 */

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "steforge/image.hpp"

namespace steforge {

struct LossWeights {
  double lambda_ts1 = 10.0;
  double lambda_f1 = 10.0;
  double lambda_v1 = 1.0;
  double lambda_v2 = 500.0;
  double lambda_1 = 1.0;
  double lambda_2 = 0.1;
};

/// Throws Error(InvalidArgument) unless every weight is finite and > 0.
void validate_weights(const LossWeights& weights);

inline constexpr double kScoreEpsilon = 1e-7;
inline constexpr double kDiceEpsilon = 1e-6;
inline constexpr double kProbabilityFloor = 1e-7;

/// Post-sigmoid discriminator outputs (a scalar or a flattened map), clamped
/// to [1e-7, 1 - 1e-7] on construction.
class DiscriminatorScore {
 public:
  explicit DiscriminatorScore(std::vector<double> values);
  DiscriminatorScore(double value) : DiscriminatorScore(std::vector<double>{value}) {}

  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
};

/// Per-step probability rows over the charset. Rows must sum to 1 within 1e-6.
class CharProbs {
 public:
  CharProbs(std::size_t steps, std::size_t classes, std::vector<double> values);

  std::size_t steps() const { return steps_; }
  std::size_t classes() const { return classes_; }
  double at(std::size_t step, std::size_t cls) const { return values_[step * classes_ + cls]; }

 private:
  std::size_t steps_;
  std::size_t classes_;
  std::vector<double> values_;
};

/// One feature map, channel-major (C x H x W).
struct FeatureMap {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> data;
};

/// Mean squared error over all elements (used for L_b_i, L_ts_fg, L_f_l2).
double l2_loss(const Image& target, const Image& output);
double l2_loss(std::span<const double> target, std::span<const double> output);

/// 1 - (2 sum t*o + eps) / (sum t^2 + sum o^2 + eps).
double dice_loss(std::span<const double> target, std::span<const double> output);
double dice_loss(const Mask& target, const Image& output);
double dice_loss(const Mask& target, const Mask& output);

/// mean[log d_real] + mean[log(1 - d_fake)], the discriminator expectation.
double gan_loss_value(const DiscriminatorScore& d_real, const DiscriminatorScore& d_fake);

enum class AdversarialMode { Saturating, NonSaturating };

/// Saturating: mean log(1 - d_fake). Non-saturating: mean -log(d_fake).
double generator_adversarial_loss(const DiscriminatorScore& d_fake, AdversarialMode mode);

/// Mean over target positions of -log p[t, target[t]] (probabilities floored
/// at 1e-7). Throws IndexOutOfRange.
double recognizer_loss(const CharProbs& probs, std::span<const std::size_t> target);

/// Sum over layers of mean((f_t - f_o)^2). Throws LayerMismatch.
double perceptual_loss(std::span<const FeatureMap> features_t, std::span<const FeatureMap> features_o);

/// C x C Gram matrix F F^T / (C H W), row-major.
std::vector<double> gram_matrix(const FeatureMap& features);

/// Sum over layers of mean((G_t - G_o)^2). Throws LayerMismatch.
double style_loss(std::span<const FeatureMap> features_t, std::span<const FeatureMap> features_o);

struct LossComponents {
  double b_i = 0.0;
  double ts_fg = 0.0;
  double ts_sk = 0.0;
  double ts_gan = 0.0;
  double f_l2 = 0.0;
  double f_gan = 0.0;
  double per = 0.0;
  double style = 0.0;
  double rec = 0.0;
};

struct LossTotals {
  double ts = 0.0;
  double f = 0.0;
  double vgg = 0.0;
  double total = 0.0;
};

/// Throws NonFiniteInput if any component is NaN or infinite.
LossTotals total_losses(const LossComponents& components, const LossWeights& weights = {});

}  // namespace steforge
