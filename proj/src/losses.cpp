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

#include "steforge/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "steforge/error.hpp"

namespace steforge {

namespace {

std::vector<double> widen(std::span<const float> v) { return {v.begin(), v.end()}; }

std::vector<double> widen(std::span<const std::uint8_t> v) { return {v.begin(), v.end()}; }

void check_layers(std::span<const FeatureMap> a, std::span<const FeatureMap> b) {
  if (a.size() != b.size()) {
    fail(ErrorKind::LayerMismatch, "feature lists have " + std::to_string(a.size()) + " and " +
                                       std::to_string(b.size()) + " layers");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool shape = a[i].channels == b[i].channels && a[i].height == b[i].height && a[i].width == b[i].width;
    const std::size_t n = a[i].channels * a[i].height * a[i].width;
    if (!shape || a[i].data.size() != n || b[i].data.size() != n || n == 0) {
      fail(ErrorKind::LayerMismatch, "layer " + std::to_string(i) + " shapes differ or are empty");
    }
  }
}

double mean_log(std::span<const double> v, bool complement) {
  double acc = 0.0;
  for (double x : v) acc += std::log(complement ? 1.0 - x : x);
  return acc / static_cast<double>(v.size());
}

}  // namespace

void validate_weights(const LossWeights& w) {
  for (double v : {w.lambda_ts1, w.lambda_f1, w.lambda_v1, w.lambda_v2, w.lambda_1, w.lambda_2}) {
    if (!std::isfinite(v) || !(v > 0.0)) fail(ErrorKind::InvalidArgument, "loss weights must be finite and > 0");
  }
}

DiscriminatorScore::DiscriminatorScore(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) fail(ErrorKind::InvalidArgument, "discriminator score is empty");
  for (double& v : values_) {
    if (std::isnan(v)) fail(ErrorKind::NonFiniteInput, "NaN discriminator score");
    v = std::clamp(v, kScoreEpsilon, 1.0 - kScoreEpsilon);
  }
}

CharProbs::CharProbs(std::size_t steps, std::size_t classes, std::vector<double> values)
    : steps_(steps), classes_(classes), values_(std::move(values)) {
  if (steps_ == 0 || classes_ == 0) fail(ErrorKind::InvalidArgument, "probability table is empty");
  if (values_.size() != steps_ * classes_) fail(ErrorKind::InvalidArgument, "probability table size mismatch");
  for (std::size_t s = 0; s < steps_; ++s) {
    double sum = 0.0;
    for (std::size_t c = 0; c < classes_; ++c) {
      const double v = values_[s * classes_ + c];
      if (!(v >= 0.0) || !std::isfinite(v)) fail(ErrorKind::InvalidArgument, "probabilities must be finite and >= 0");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      fail(ErrorKind::InvalidArgument, "row " + std::to_string(s) + " sums to " + std::to_string(sum));
    }
  }
}

double l2_loss(std::span<const double> target, std::span<const double> output) {
  if (target.size() != output.size()) fail(ErrorKind::DimMismatch, "l2_loss inputs differ in size");
  if (target.empty()) fail(ErrorKind::InvalidArgument, "l2_loss of empty inputs");
  double acc = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double d = target[i] - output[i];
    acc += d * d;
  }
  return acc / static_cast<double>(target.size());
}

double l2_loss(const Image& target, const Image& output) {
  if (target.dims() != output.dims() || target.channels() != output.channels()) {
    fail(ErrorKind::DimMismatch, "l2_loss images differ in shape");
  }
  return l2_loss(widen(target.data()), widen(output.data()));
}

double dice_loss(std::span<const double> target, std::span<const double> output) {
  if (target.size() != output.size()) fail(ErrorKind::DimMismatch, "dice_loss inputs differ in size");
  double inter = 0.0, tt = 0.0, oo = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    inter += target[i] * output[i];
    tt += target[i] * target[i];
    oo += output[i] * output[i];
  }
  return 1.0 - (2.0 * inter + kDiceEpsilon) / (tt + oo + kDiceEpsilon);
}

double dice_loss(const Mask& target, const Image& output) {
  if (target.dims() != output.dims() || output.channels() != 1) {
    fail(ErrorKind::DimMismatch, "dice_loss expects a single-channel output of the mask's size");
  }
  return dice_loss(widen(target.data()), widen(output.data()));
}

double dice_loss(const Mask& target, const Mask& output) {
  if (target.dims() != output.dims()) fail(ErrorKind::DimMismatch, "dice_loss masks differ in size");
  return dice_loss(widen(target.data()), widen(output.data()));
}

double gan_loss_value(const DiscriminatorScore& d_real, const DiscriminatorScore& d_fake) {
  return mean_log(d_real.values(), false) + mean_log(d_fake.values(), true);
}

double generator_adversarial_loss(const DiscriminatorScore& d_fake, AdversarialMode mode) {
  return mode == AdversarialMode::Saturating ? mean_log(d_fake.values(), true) : -mean_log(d_fake.values(), false);
}

double recognizer_loss(const CharProbs& probs, std::span<const std::size_t> target) {
  if (target.empty()) fail(ErrorKind::InvalidArgument, "empty target sequence");
  if (target.size() > probs.steps()) {
    fail(ErrorKind::IndexOutOfRange, "target length " + std::to_string(target.size()) + " exceeds " +
                                         std::to_string(probs.steps()) + " steps");
  }
  double acc = 0.0;
  for (std::size_t t = 0; t < target.size(); ++t) {
    if (target[t] >= probs.classes()) {
      fail(ErrorKind::IndexOutOfRange, "label " + std::to_string(target[t]) + " outside " +
                                           std::to_string(probs.classes()) + " classes");
    }
    acc -= std::log(std::max(probs.at(t, target[t]), kProbabilityFloor));
  }
  return acc / static_cast<double>(target.size());
}

double perceptual_loss(std::span<const FeatureMap> features_t, std::span<const FeatureMap> features_o) {
  check_layers(features_t, features_o);
  double total = 0.0;
  for (std::size_t i = 0; i < features_t.size(); ++i) total += l2_loss(features_t[i].data, features_o[i].data);
  return total;
}

std::vector<double> gram_matrix(const FeatureMap& f) {
  const std::size_t C = f.channels;
  const std::size_t N = f.height * f.width;
  const double norm = static_cast<double>(C * N);
  std::vector<double> g(C * C, 0.0);
  for (std::size_t a = 0; a < C; ++a) {
    for (std::size_t b = a; b < C; ++b) {
      double acc = 0.0;
      for (std::size_t k = 0; k < N; ++k) acc += f.data[a * N + k] * f.data[b * N + k];
      g[a * C + b] = g[b * C + a] = acc / norm;
    }
  }
  return g;
}

double style_loss(std::span<const FeatureMap> features_t, std::span<const FeatureMap> features_o) {
  check_layers(features_t, features_o);
  double total = 0.0;
  for (std::size_t i = 0; i < features_t.size(); ++i) {
    total += l2_loss(gram_matrix(features_t[i]), gram_matrix(features_o[i]));
  }
  return total;
}

LossTotals total_losses(const LossComponents& c, const LossWeights& w) {
  for (double v : {c.b_i, c.ts_fg, c.ts_sk, c.ts_gan, c.f_l2, c.f_gan, c.per, c.style, c.rec}) {
    if (!std::isfinite(v)) fail(ErrorKind::NonFiniteInput, "loss component is not finite");
  }
  validate_weights(w);
  LossTotals t;
  t.ts = w.lambda_ts1 * c.ts_fg + c.ts_sk + c.ts_gan;
  t.f = w.lambda_f1 * c.f_l2 + c.f_gan;
  t.vgg = w.lambda_v1 * c.per + w.lambda_v2 * c.style;
  t.total = c.b_i + t.ts + t.f + w.lambda_1 * t.vgg + w.lambda_2 * c.rec;
  return t;
}

}  // namespace steforge
