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
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>

#include "steforge/error.hpp"
#include "steforge/metrics.hpp"
#include "steforge/png_io.hpp"
#include "test_support.hpp"

using namespace steforge;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

GaussianStats stats(std::vector<double> mean, std::vector<double> cov) {
  return GaussianStats{mean.size(), std::move(mean), std::move(cov)};
}

GaussianStats scaled_identity(std::size_t d, double s, std::vector<double> mean) {
  std::vector<double> cov(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) cov[i * d + i] = s;
  return stats(std::move(mean), std::move(cov));
}

/// A A^T / d + small ridge: symmetric positive definite.
GaussianStats random_psd(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> a(d * d), mean(d), cov(d * d, 0.0);
  for (auto& v : a) v = n(rng);
  for (auto& v : mean) v = n(rng);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      double acc = 0.0;
      for (std::size_t k = 0; k < d; ++k) acc += a[r * d + k] * a[c * d + k];
      cov[r * d + c] = acc / static_cast<double>(d);
    }
    cov[r * d + r] += 0.05;
  }
  return stats(std::move(mean), std::move(cov));
}

FeatureMatrix gaussian_features(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  std::normal_distribution<double> g(0.0, 1.0);
  FeatureMatrix f{n, d, std::vector<double>(n * d)};
  for (auto& v : f.values) v = g(rng);
  return f;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("mse and psnr closed forms") {
    const Image zero(8, 8, 3, 0.0f);
    CHECK(mse(zero, zero) == 0.0);
    CHECK(std::isinf(psnr(zero, zero)));
    CHECK(psnr(zero, zero) > 0.0);
    CHECK(std::abs(psnr(zero, Image(8, 8, 3, 0.1f)) - 20.0) < 0.01);
    CHECK(psnr(zero, Image(8, 8, 3, 1.0f)) == 0.0);
    CHECK(kind_of([&] { mse(zero, Image(8, 9, 3, 0.0f)); }) == ErrorKind::DimMismatch);
  }

  TEST_CASE("ssim closed forms") {
    std::mt19937_64 rng(1);
    const Image x = testing::random_image(rng, 64, 256, 3);
    CHECK(std::abs(ssim(x, x) - 1.0) <= 1e-9);
    const double c1 = 1e-4;
    CHECK(std::abs(ssim(Image(32, 32, 1, 0.0f), Image(32, 32, 1, 1.0f)) - c1 / (1.0 + c1)) <= 1e-7);
    CHECK(ssim(Image(32, 32, 1, 0.4f), Image(32, 32, 1, 0.4f)) == 1.0);
    CHECK(kind_of([] { ssim(Image(10, 40, 1, 0.0f), Image(10, 40, 1, 0.0f)); }) == ErrorKind::TooSmall);

    SsimOptions per_channel;
    per_channel.per_channel = true;
    CHECK(std::abs(ssim(x, x, per_channel) - 1.0) <= 1e-9);
  }

  TEST_CASE("image metrics are symmetric and ssim is bounded") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 30; ++i) {
      const Image a = testing::random_image(rng, 16, 24, i % 2 ? 3 : 1);
      Image b = testing::random_image(rng, 16, 24, i % 2 ? 3 : 1);
      if (i % 3 == 0) {
        // Anti-correlated pair to push SSIM towards -1.
        for (std::size_t k = 0; k < b.size(); ++k) b.data()[k] = 1.0f - a.data()[k];
      }
      CHECK(mse(a, b) == mse(b, a));
      CHECK(psnr(a, b) == psnr(b, a));
      const double s = ssim(a, b);
      CHECK(s == doctest::Approx(ssim(b, a)).epsilon(1e-12));
      CHECK(s >= -1.0);
      CHECK(s <= 1.0);
    }
  }

  TEST_CASE("compute_stats") {
    const GaussianStats s = compute_stats(FeatureMatrix{2, 2, {0, 0, 2, 2}});
    CHECK(s.mean == std::vector<double>{1, 1});
    CHECK(s.covariance == std::vector<double>{2, 2, 2, 2});
    const GaussianStats same = compute_stats(FeatureMatrix{4, 3, {1, 2, 3, 1, 2, 3, 1, 2, 3, 1, 2, 3}});
    CHECK(same.covariance == std::vector<double>(9, 0.0));
    CHECK(kind_of([] { compute_stats(FeatureMatrix{1, 2, {1, 2}}); }) == ErrorKind::TooFewSamples);
    CHECK(kind_of([] { compute_stats(FeatureMatrix{2, 1, {1, std::nan("")}}); }) == ErrorKind::NonFinite);
  }

  TEST_CASE("frechet distance closed forms") {
    std::mt19937_64 rng(3);
    const GaussianStats r = random_psd(rng, 6);
    CHECK(std::abs(frechet_distance(r, r)) <= 1e-6);
    CHECK(std::abs(frechet_distance(scaled_identity(2, 1, {0, 0}), scaled_identity(2, 1, {3, 4})) - 25.0) <= 1e-6);
    CHECK(std::abs(frechet_distance(scaled_identity(2, 4, {0, 0}), scaled_identity(2, 1, {0, 0})) - 2.0) <= 1e-6);
    // Singular covariances are fine.
    const GaussianStats rank1 = stats({0, 0}, {1, 1, 1, 1});
    CHECK(std::abs(frechet_distance(rank1, rank1)) <= 1e-6);
  }

  TEST_CASE("frechet distance: symmetry and non-negativity") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 100; ++i) {
      const std::size_t d = 2 + static_cast<std::size_t>(i % 7);
      const GaussianStats a = random_psd(rng, d), b = random_psd(rng, d);
      const double ab = frechet_distance(a, b), ba = frechet_distance(b, a);
      CHECK(ab >= -1e-6);
      CHECK(std::abs(ab - ba) < 1e-6);
    }
  }

  TEST_CASE("frechet distance: input validation") {
    const GaussianStats ok = scaled_identity(2, 1, {0, 0});
    CHECK(kind_of([&] { frechet_distance(ok, scaled_identity(3, 1, {0, 0, 0})); }) == ErrorKind::DimMismatch);
    CHECK(kind_of([&] { frechet_distance(ok, stats({0, 0}, {1, 0.5, 0.2, 1})); }) == ErrorKind::NonSymmetric);
    CHECK(kind_of([&] { frechet_distance(ok, stats({0, 0}, {1, 0, 0, -1})); }) == ErrorKind::NotPSD);
  }

  TEST_CASE("frechet distance of split samples shrinks with n") {
    std::mt19937_64 rng(5);
    std::vector<double> values;
    for (std::size_t n : {100u, 1000u, 10000u}) {
      const FeatureMatrix all = gaussian_features(rng, 2 * n, 8);
      FeatureMatrix a{n, 8, {all.values.begin(), all.values.begin() + static_cast<long>(n * 8)}};
      FeatureMatrix b{n, 8, {all.values.begin() + static_cast<long>(n * 8), all.values.end()}};
      values.push_back(frechet_distance(compute_stats(a), compute_stats(b)));
    }
    CHECK(values[0] > values[1]);
    CHECK(values[1] > values[2]);
    CHECK(values[2] < 0.05);
  }

  TEST_CASE("feature files: binary and CSV") {
    testing::TempDir dir("feat");
    const FeatureMatrix f{3, 2, {0.5, -1.25, 2.0, 3.0, 0.0, 1e-3}};
    write_feature_file(dir / "f.bin", f);
    const FeatureMatrix back = read_feature_file(dir / "f.bin");
    CHECK(back.n == 3);
    CHECK(back.d == 2);
    for (std::size_t i = 0; i < 6; ++i) CHECK(back.values[i] == doctest::Approx(f.values[i]).epsilon(1e-7));

    std::ofstream(dir / "f.csv") << "0.5, -1.25\n2,3\n\n0,0.001\n";
    const FeatureMatrix csv = read_feature_file(dir / "f.csv");
    CHECK(csv.n == 3);
    CHECK(csv.values == std::vector<double>{0.5, -1.25, 2, 3, 0, 0.001});

    std::ofstream(dir / "ragged.csv") << "1,2\n3\n";
    CHECK(kind_of([&] { read_feature_file(dir / "ragged.csv"); }) == ErrorKind::MalformedFile);
    std::ofstream(dir / "text.csv") << "1,abc\n";
    CHECK(kind_of([&] { read_feature_file(dir / "text.csv"); }) == ErrorKind::MalformedFile);
    std::string truncated = testing::slurp(dir / "f.bin");
    truncated.pop_back();
    std::ofstream(dir / "short.bin", std::ios::binary) << truncated;
    CHECK(kind_of([&] { read_feature_file(dir / "short.bin"); }) == ErrorKind::MalformedFile);
    CHECK(kind_of([&] { read_feature_file(dir / "missing.bin"); }) == ErrorKind::MalformedFile);
  }

  TEST_CASE("word recognition accuracy") {
    const std::vector<std::string> p{"cool", "test"}, t{"Cool", "test"};
    CHECK(wra(p, p) == 1.0);
    CHECK(wra(p, t, true) == 0.5);
    CHECK(wra(p, t, false) == 1.0);
    const std::vector<std::string> one{"x"}, none;
    CHECK(kind_of([&] { wra(p, one); }) == ErrorKind::LengthMismatch);
    CHECK(kind_of([&] { wra(none, none); }) == ErrorKind::EmptyLists);

    testing::TempDir dir("wra");
    std::ofstream(dir / "w.txt") << "alpha\r\nbeta\n";
    CHECK(read_transcriptions(dir / "w.txt") == std::vector<std::string>{"alpha", "beta"});
  }

  TEST_CASE("evaluate_dirs") {
    testing::TempDir dir("eval");
    std::mt19937_64 rng(6);
    fs::create_directories(dir / "x");
    fs::create_directories(dir / "y");
    std::vector<Image> images;
    for (int i = 0; i < 6; ++i) {
      images.push_back(from_bytes(to_bytes(testing::random_image(rng, 24, 40, 3))));
      const std::string name = "img" + std::to_string(i) + ".png";
      write_image(dir / "x" / name, images.back());
      Image other = images.back();
      if (i == 2) {
        for (float& v : other.data()) v = 1.0f - v;
      }
      write_image(dir / "y" / name, other);
    }

    EvaluateOptions opts;
    opts.threads = 3;
    const MetricReport self = evaluate_dirs(dir / "x", dir / "x", opts);
    CHECK(self.mse == 0.0);
    CHECK(std::isinf(self.psnr_db));
    CHECK(std::abs(self.ssim - 1.0) <= 1e-9);
    CHECK(self.n_pairs == 6);
    CHECK_FALSE(self.fid.has_value());
    const auto json = nlohmann::json::parse(report_to_json(self));
    CHECK(json["psnr_db"] == "inf");
    CHECK_FALSE(json.contains("fid"));
    CHECK(report_to_csv(self).rfind("mse,psnr_db,ssim,fid,wra,n_pairs\n", 0) == 0);

    const MetricReport one_off = evaluate_dirs(dir / "x", dir / "y", opts);
    double sum = 0.0;
    for (const auto& p : one_off.pairs) sum += p.mse;
    CHECK(one_off.mse > 0.0);
    CHECK(one_off.mse == doctest::Approx(sum / 6.0).epsilon(1e-12));
    CHECK(one_off.pairs[2].mse == mse(images[2], read_image(dir / "y" / "img2.png")));
    // Five identical pairs count at the cap.
    CHECK(one_off.psnr_db == doctest::Approx((5 * kPsnrCapDb + one_off.pairs[2].psnr_db) / 6.0).epsilon(1e-12));

    EvaluateOptions serial;
    const MetricReport again = evaluate_dirs(dir / "x", dir / "y", serial);
    CHECK(again.mse == one_off.mse);
    CHECK(again.ssim == one_off.ssim);

    write_feature_file(dir / "fa.bin", gaussian_features(rng, 50, 4));
    std::ofstream(dir / "pred.txt") << "a\nb\nc\n";
    std::ofstream(dir / "tgt.txt") << "a\nB\nc\n";
    EvaluateOptions full;
    full.fid_features_a = full.fid_features_b = dir / "fa.bin";
    full.wra_pred = dir / "pred.txt";
    full.wra_target = dir / "tgt.txt";
    const MetricReport withall = evaluate_dirs(dir / "x", dir / "x", full);
    REQUIRE(withall.fid.has_value());
    CHECK(std::abs(*withall.fid) <= 1e-6);
    REQUIRE(withall.wra.has_value());
    CHECK(*withall.wra == doctest::Approx(2.0 / 3.0));
  }

  TEST_CASE("evaluate_dirs: pairing errors") {
    testing::TempDir dir("evalerr");
    fs::create_directories(dir / "a");
    fs::create_directories(dir / "b");
    write_image(dir / "a" / "one.png", Image(16, 16, 3, 0.2f));
    write_image(dir / "b" / "two.png", Image(16, 16, 3, 0.2f));
    CHECK(kind_of([&] { evaluate_dirs(dir / "a", dir / "b"); }) == ErrorKind::NoPairs);

    write_image(dir / "a" / "shared.png", Image(16, 16, 3, 0.2f));
    write_image(dir / "b" / "shared.png", Image(16, 16, 3, 0.2f));
    const MetricReport r = evaluate_dirs(dir / "a", dir / "b");
    CHECK(r.n_pairs == 1);
    CHECK(r.unmatched == std::vector<std::string>{"one.png", "two.png"});

    write_image(dir / "b" / "shared.png", Image(16, 20, 3, 0.2f));
    try {
      evaluate_dirs(dir / "a", dir / "b");
      FAIL("size mismatch not detected");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::PairDimMismatch);
      CHECK(std::string(e.what()).find("shared.png") != std::string::npos);
    }
  }
}
