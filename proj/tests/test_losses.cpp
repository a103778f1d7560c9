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
#include <limits>
#include <random>

#include "steforge/error.hpp"
#include "steforge/losses.hpp"
#include "test_support.hpp"

using namespace steforge;

namespace {

std::vector<double> uniform_rows(std::size_t steps, std::size_t classes) {
  return std::vector<double>(steps * classes, 1.0 / static_cast<double>(classes));
}

FeatureMap constant_map(std::size_t c, std::size_t h, std::size_t w, double v) {
  return FeatureMap{c, h, w, std::vector<double>(c * h * w, v)};
}

}  // namespace

TEST_SUITE("losses") {
  TEST_CASE("l2 loss") {
    const Image zero(4, 4, 3, 0.0f);
    CHECK(l2_loss(zero, zero) == 0.0);
    CHECK(l2_loss(zero, Image(4, 4, 3, 0.5f)) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(l2_loss(zero, Image(4, 4, 3, 1.0f)) == 1.0);
    CHECK_THROWS_AS(l2_loss(zero, Image(4, 5, 3, 0.0f)), Error);
  }

  TEST_CASE("l2 loss is non-negative and symmetric") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 100; ++i) {
      const Image a = testing::random_image(rng, 5, 6, 3), b = testing::random_image(rng, 5, 6, 3);
      CHECK(l2_loss(a, b) > 0.0);
      CHECK(l2_loss(a, b) == l2_loss(b, a));
      CHECK(l2_loss(a, a) == 0.0);
    }
  }

  TEST_CASE("dice loss examples") {
    const std::vector<double> t{1, 1, 0, 0}, o{1, 0, 0, 0};
    CHECK(dice_loss(t, o) == doctest::Approx(1.0 - 4.0 / 6.0).epsilon(1e-5));
    CHECK(std::abs(dice_loss(t, t)) <= 1e-6);
    const std::vector<double> a{1, 1, 0, 0}, b{0, 0, 1, 1};
    CHECK(dice_loss(a, b) == doctest::Approx(1.0).epsilon(1e-5));
    // Empty against empty is defined as perfect overlap.
    CHECK(dice_loss(std::vector<double>(4, 0.0), std::vector<double>(4, 0.0)) == 0.0);

    Mask m(3, 3);
    m.at(1, 1) = m.at(0, 2) = 1;
    CHECK(std::abs(dice_loss(m, m)) <= 1e-6);
    CHECK(std::abs(dice_loss(m, mask_to_image(m))) <= 1e-6);
  }

  TEST_CASE("dice loss stays in [0, 1]") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
      std::vector<double> t(32), o(32);
      for (auto& v : t) v = u(rng) < 0.3 ? 1.0 : 0.0;
      for (auto& v : o) v = u(rng);
      const double d = dice_loss(t, o);
      REQUIRE(d >= -1e-12);
      REQUIRE(d <= 1.0 + 1e-12);
    }
  }

  TEST_CASE("gan loss value") {
    CHECK(gan_loss_value(0.5, 0.5) == doctest::Approx(2.0 * std::log(0.5)).epsilon(1e-6));
    CHECK(std::abs(gan_loss_value(0.5, 0.5) + 1.3863) < 1e-4);
    CHECK(std::abs(gan_loss_value(0.9, 0.1) + 0.2107) < 1e-4);
    const double optimum = gan_loss_value(1.0, 0.0);
    CHECK(optimum < 0.0);
    CHECK(optimum > -1e-6);
    CHECK(std::isfinite(gan_loss_value(0.0, 1.0)));
    CHECK_THROWS_AS(DiscriminatorScore(std::numeric_limits<double>::quiet_NaN()), Error);
    CHECK_THROWS_AS(DiscriminatorScore(std::vector<double>{}), Error);

    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) CHECK(gan_loss_value(u(rng), u(rng)) <= 0.0);
  }

  TEST_CASE("generator adversarial loss") {
    CHECK(std::abs(generator_adversarial_loss(0.5, AdversarialMode::NonSaturating) - 0.6931) < 1e-4);
    CHECK(std::abs(generator_adversarial_loss(0.5, AdversarialMode::Saturating) + 0.6931) < 1e-4);
    const double at_one = generator_adversarial_loss(1.0, AdversarialMode::NonSaturating);
    CHECK(at_one >= 0.0);
    CHECK(at_one < 1e-6);
  }

  TEST_CASE("recognizer loss") {
    std::vector<double> onehot(3 * 52, 0.0);
    const std::vector<std::size_t> target{4, 30, 51};
    for (std::size_t t = 0; t < 3; ++t) onehot[t * 52 + target[t]] = 1.0;
    CHECK(std::abs(recognizer_loss(CharProbs(3, 52, onehot), target)) < 1e-6);
    CHECK(std::abs(recognizer_loss(CharProbs(3, 52, uniform_rows(3, 52)), target) - 3.9512) < 1e-4);
    CHECK(std::abs(recognizer_loss(CharProbs(3, 62, uniform_rows(3, 62)), target) - 4.1271) < 1e-4);

    CHECK_THROWS_AS(CharProbs(2, 3, {0.5, 0.5, 0.5, 0.2, 0.2, 0.6}), Error);
    CHECK_THROWS_AS(recognizer_loss(CharProbs(1, 52, uniform_rows(1, 52)), target), Error);
    const std::vector<std::size_t> bad{60};
    CHECK_THROWS_AS(recognizer_loss(CharProbs(1, 52, uniform_rows(1, 52)), bad), Error);

    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    for (int i = 0; i < 200; ++i) {
      std::vector<double> p(4 * 10);
      for (std::size_t s = 0; s < 4; ++s) {
        double sum = 0.0;
        for (std::size_t c = 0; c < 10; ++c) sum += p[s * 10 + c] = u(rng);
        for (std::size_t c = 0; c < 10; ++c) p[s * 10 + c] /= sum;
      }
      const std::vector<std::size_t> tgt{1, 2, 3, 9};
      CHECK(recognizer_loss(CharProbs(4, 10, p), tgt) > 0.0);
    }
  }

  TEST_CASE("perceptual loss") {
    const std::vector<FeatureMap> a{constant_map(2, 3, 3, 0.0)};
    CHECK(perceptual_loss(a, a) == 0.0);
    const std::vector<FeatureMap> b{constant_map(2, 3, 3, 1.0)};
    CHECK(perceptual_loss(a, b) == 1.0);

    const std::vector<FeatureMap> t2{constant_map(1, 2, 2, 0.0), constant_map(3, 2, 2, 0.0)};
    const std::vector<FeatureMap> o2{constant_map(1, 2, 2, 0.5), constant_map(3, 2, 2, std::sqrt(0.75))};
    CHECK(perceptual_loss(t2, o2) == doctest::Approx(1.0).epsilon(1e-12));

    const std::vector<FeatureMap> other_shape{constant_map(2, 3, 4, 0.0)};
    CHECK_THROWS_AS(perceptual_loss(a, other_shape), Error);
    CHECK_THROWS_AS(perceptual_loss(a, t2), Error);
  }

  TEST_CASE("gram and style loss") {
    const double a = 0.7, b = 0.3;
    const std::vector<FeatureMap> ft{constant_map(1, 4, 5, a)}, fo{constant_map(1, 4, 5, b)};
    CHECK(gram_matrix(ft[0])[0] == doctest::Approx(a * a).epsilon(1e-12));
    const double expected = (a * a - b * b) * (a * a - b * b);
    CHECK(style_loss(ft, fo) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(style_loss(ft, ft) == 0.0);

    // A channel permutation applied to both sides leaves the loss unchanged.
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    FeatureMap x{3, 2, 4, std::vector<double>(24)}, y{3, 2, 4, std::vector<double>(24)};
    for (auto& v : x.data) v = u(rng);
    for (auto& v : y.data) v = u(rng);
    auto permute = [](const FeatureMap& f) {
      FeatureMap p = f;
      const std::size_t n = f.height * f.width;
      const std::size_t order[3] = {2, 0, 1};
      for (std::size_t c = 0; c < 3; ++c) {
        std::copy_n(f.data.begin() + static_cast<long>(order[c] * n), n, p.data.begin() + static_cast<long>(c * n));
      }
      return p;
    };
    const std::vector<FeatureMap> xs{x}, ys{y}, xp{permute(x)}, yp{permute(y)};
    CHECK(style_loss(xs, ys) == doctest::Approx(style_loss(xp, yp)).epsilon(1e-12));
  }

  TEST_CASE("weighted totals") {
    const LossTotals zero = total_losses(LossComponents{});
    CHECK(zero.ts == 0.0);
    CHECK(zero.f == 0.0);
    CHECK(zero.vgg == 0.0);
    CHECK(zero.total == 0.0);

    const LossComponents ones{1, 1, 1, 1, 1, 1, 1, 1, 1};
    const LossTotals t = total_losses(ones);
    CHECK(t.ts == 12.0);
    CHECK(t.f == 11.0);
    CHECK(t.vgg == 501.0);
    CHECK(t.total == 525.1);

    LossWeights w;
    w.lambda_ts1 = 20.0;
    // 20 * 1 + 1 + 1: only the weighted fill term doubles.
    CHECK(total_losses(ones, w).ts == 22.0);

    LossComponents bad = ones;
    bad.per = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(total_losses(bad), Error);
    w.lambda_2 = 0.0;
    CHECK_THROWS_AS(total_losses(ones, w), Error);
  }

  TEST_CASE("total is linear in the recognizer term") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 4.0);
    for (int i = 0; i < 100; ++i) {
      LossComponents c{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), 1.0};
      const double base = total_losses(c).total;
      c.rec = 2.0;
      // The difference of two large sums carries their rounding error.
      CHECK(std::abs(total_losses(c).total - base - LossWeights{}.lambda_2) < 1e-10);
    }
    LossComponents only_rec{};
    only_rec.rec = 1.0;
    CHECK(total_losses(only_rec).total - total_losses(LossComponents{}).total == LossWeights{}.lambda_2);
  }
}
