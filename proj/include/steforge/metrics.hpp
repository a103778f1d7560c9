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
 * @file metrics.hpp
 * @brief Evaluation suite: MSE, PSNR, SSIM, Frechet distance and WRA.
 *
 * All image metrics work in unit range (MAX = 1, L = 1). The Frechet distance
 * consumes embedding vectors produced elsewhere and stored as feature files:
 *
 *   binary:  "FIDF" | u32 n | u32 d | n*d little-endian float32, row-major
 *   CSV:     n lines of d comma-separated numbers
 */

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "steforge/image.hpp"

namespace steforge {

/// Aggregate PSNR treats identical pairs as this many dB.
inline constexpr double kPsnrCapDb = 100.0;

double mse(const Image& a, const Image& b);

/// 10 log10(1 / mse); +infinity when the images are identical.
double psnr(const Image& a, const Image& b);

struct SsimOptions {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  // Average SSIM over R, G, B instead of computing it on luma.
  bool per_channel = false;
};

/// Mean SSIM over valid window positions. Throws DimMismatch, TooSmall.
double ssim(const Image& a, const Image& b, const SsimOptions& options = {});

/// n samples of dimension d, row-major.
struct FeatureMatrix {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> values;
};

/// Detects the binary magic, otherwise parses CSV. Throws MalformedFile.
FeatureMatrix read_feature_file(const std::filesystem::path& path);
void write_feature_file(const std::filesystem::path& path, const FeatureMatrix& features);

struct GaussianStats {
  std::size_t dim = 0;
  std::vector<double> mean;
  std::vector<double> covariance;  // dim x dim, row-major
};

/// Sample mean and unbiased covariance. Throws TooFewSamples (n < 2), NonFinite.
GaussianStats compute_stats(const FeatureMatrix& features);

/// |mu1 - mu2|^2 + Tr(S1 + S2 - 2 (S1 S2)^(1/2)).
/// Throws DimMismatch, NonSymmetric, NotPSD.
double frechet_distance(const GaussianStats& a, const GaussianStats& b);

/// Fraction of exact matches. Throws LengthMismatch, EmptyLists.
double wra(std::span<const std::string> predicted, std::span<const std::string> target, bool case_sensitive = true);

/// One transcription per line; a trailing newline does not add an entry.
std::vector<std::string> read_transcriptions(const std::filesystem::path& path);

struct PairMetrics {
  std::string name;
  double mse = 0.0;
  double psnr_db = 0.0;  // +infinity for identical pairs
  double ssim = 0.0;
};

struct MetricReport {
  double mse = 0.0;
  double psnr_db = 0.0;  // +infinity only when every pair is identical
  double ssim = 0.0;
  std::optional<double> fid;
  std::optional<double> wra;
  std::size_t n_pairs = 0;
  std::vector<std::string> unmatched;  // filenames present on one side only
  std::vector<PairMetrics> pairs;      // sorted by filename
};

struct EvaluateOptions {
  std::filesystem::path fid_features_a;
  std::filesystem::path fid_features_b;
  std::filesystem::path wra_pred;
  std::filesystem::path wra_target;
  bool case_sensitive = true;
  SsimOptions ssim;
  unsigned threads = 1;
};

/// Pairs PNGs by filename and averages per-pair metrics in filename order.
/// Throws NoPairs, PairDimMismatch, MalformedFile.
MetricReport evaluate_dirs(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir,
                           const EvaluateOptions& options = {});

std::string report_to_json(const MetricReport& report);
/// Header "mse,psnr_db,ssim,fid,wra,n_pairs" plus one row; omitted metrics are empty.
std::string report_to_csv(const MetricReport& report);

}  // namespace steforge
