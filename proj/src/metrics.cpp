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

#include "steforge/metrics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "steforge/error.hpp"
#include "steforge/png_io.hpp"

namespace steforge {

namespace fs = std::filesystem;

namespace {

void check_same_shape(const Image& a, const Image& b) {
  if (a.dims() != b.dims() || a.channels() != b.channels()) fail(ErrorKind::DimMismatch, "images differ in shape");
}

std::vector<double> gaussian_window(int size, double sigma) {
  std::vector<double> w(static_cast<std::size_t>(size));
  const double center = (size - 1) / 2.0;
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    const double d = i - center;
    w[static_cast<std::size_t>(i)] = std::exp(-(d * d) / (2.0 * sigma * sigma));
    sum += w[static_cast<std::size_t>(i)];
  }
  for (double& v : w) v /= sum;
  return w;
}

// "Valid" separable filtering: output is (H - k + 1) x (W - k + 1).
std::vector<double> filter_valid(const std::vector<double>& src, int H, int W, const std::vector<double>& k) {
  const int K = static_cast<int>(k.size());
  const int OH = H - K + 1;
  const int OW = W - K + 1;
  std::vector<double> tmp(static_cast<std::size_t>(H) * static_cast<std::size_t>(OW));
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < OW; ++x) {
      double acc = 0.0;
      for (int i = 0; i < K; ++i) acc += k[static_cast<std::size_t>(i)] * src[static_cast<std::size_t>(y * W + x + i)];
      tmp[static_cast<std::size_t>(y * OW + x)] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(OH) * static_cast<std::size_t>(OW));
  for (int y = 0; y < OH; ++y) {
    for (int x = 0; x < OW; ++x) {
      double acc = 0.0;
      for (int i = 0; i < K; ++i) {
        acc += k[static_cast<std::size_t>(i)] * tmp[static_cast<std::size_t>((y + i) * OW + x)];
      }
      out[static_cast<std::size_t>(y * OW + x)] = acc;
    }
  }
  return out;
}

double ssim_plane(const std::vector<double>& x, const std::vector<double>& y, int H, int W, const SsimOptions& o) {
  const auto k = gaussian_window(o.window, o.sigma);
  std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto mx = filter_valid(x, H, W, k);
  const auto my = filter_valid(y, H, W, k);
  const auto mxx = filter_valid(xx, H, W, k);
  const auto myy = filter_valid(yy, H, W, k);
  const auto mxy = filter_valid(xy, H, W, k);

  const double c1 = (o.k1 * 1.0) * (o.k1 * 1.0);
  const double c2 = (o.k2 * 1.0) * (o.k2 * 1.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double vx = mxx[i] - mx[i] * mx[i];
    const double vy = myy[i] - my[i] * my[i];
    const double cov = mxy[i] - mx[i] * my[i];
    acc += ((2.0 * mx[i] * my[i] + c1) * (2.0 * cov + c2)) /
           ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
  }
  return acc / static_cast<double>(mx.size());
}

std::vector<double> plane(const Image& img, int c) {
  std::vector<double> out(img.dims().area());
  const auto C = static_cast<std::size_t>(img.channels());
  const auto d = img.data();
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = d[p * C + static_cast<std::size_t>(c)];
  return out;
}

Eigen::MatrixXd as_matrix(const GaussianStats& s) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(s.dim), static_cast<Eigen::Index>(s.dim));
  for (std::size_t r = 0; r < s.dim; ++r) {
    for (std::size_t c = 0; c < s.dim; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = s.covariance[r * s.dim + c];
    }
  }
  return m;
}

void check_stats(const GaussianStats& s, const char* which) {
  if (s.mean.size() != s.dim || s.covariance.size() != s.dim * s.dim || s.dim == 0) {
    fail(ErrorKind::DimMismatch, std::string(which) + " statistics have inconsistent sizes");
  }
  double scale = 1.0;
  for (double v : s.covariance) {
    if (!std::isfinite(v)) fail(ErrorKind::NonFinite, std::string(which) + " covariance is not finite");
    scale = std::max(scale, std::abs(v));
  }
  for (std::size_t r = 0; r < s.dim; ++r) {
    for (std::size_t c = r + 1; c < s.dim; ++c) {
      if (std::abs(s.covariance[r * s.dim + c] - s.covariance[c * s.dim + r]) > 1e-9 * scale) {
        fail(ErrorKind::NonSymmetric, std::string(which) + " covariance is not symmetric");
      }
    }
  }
}

constexpr double kNegativeEigenTolerance = 1e-5;

// Eigenvalues of a symmetric PSD matrix, clamping round-off negatives.
Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> psd_eigen(const Eigen::MatrixXd& m, const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) fail(ErrorKind::NotPSD, std::string(what) + ": eigendecomposition failed");
  if (es.eigenvalues().minCoeff() < -kNegativeEigenTolerance) {
    fail(ErrorKind::NotPSD, std::string(what) + " has eigenvalue " + std::to_string(es.eigenvalues().minCoeff()));
  }
  return es;
}

std::string trim_copy(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::uint32_t read_u32_le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u32_le(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

FeatureMatrix parse_csv_features(const std::string& text, const fs::path& path) {
  FeatureMatrix m;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim_copy(line);
    if (line.empty()) continue;
    std::size_t cols = 0;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      const std::size_t len = comma == std::string::npos ? std::string::npos : comma - start;
      const std::string cell = trim_copy(line.substr(start, len));
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        fail(ErrorKind::MalformedFile, path.string() + ":" + std::to_string(line_no) + ": bad value '" + cell + "'");
      }
      m.values.push_back(v);
      ++cols;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (m.n == 0) m.d = cols;
    if (cols != m.d) fail(ErrorKind::MalformedFile, path.string() + ":" + std::to_string(line_no) + ": ragged row");
    ++m.n;
  }
  if (m.n == 0) fail(ErrorKind::MalformedFile, path.string() + ": no feature rows");
  return m;
}

double aggregate_psnr(const std::vector<PairMetrics>& pairs) {
  const bool all_identical =
      std::all_of(pairs.begin(), pairs.end(), [](const PairMetrics& p) { return std::isinf(p.psnr_db); });
  if (all_identical) return std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (const auto& p : pairs) acc += std::min(p.psnr_db, kPsnrCapDb);
  return acc / static_cast<double>(pairs.size());
}

std::set<std::string> png_names(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) fail(ErrorKind::Io, "not a directory: " + dir.string());
  std::set<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".png") names.insert(e.path().filename().string());
  }
  return names;
}

Image expand_gray(const Image& img) {
  if (img.channels() == 3) return img;
  Image out(img.height(), img.width(), 3);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < 3; ++c) out.at(y, x, c) = img.at(y, x);
    }
  }
  return out;
}

std::string format_number(double v) {
  if (std::isinf(v)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

double mse(const Image& a, const Image& b) {
  check_same_shape(a, b);
  double acc = 0.0;
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    const double d = static_cast<double>(da[i]) - static_cast<double>(db[i]);
    acc += d * d;
  }
  return acc / static_cast<double>(da.size());
}

double psnr(const Image& a, const Image& b) {
  const double e = mse(a, b);
  if (e == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / e);
}

double ssim(const Image& a, const Image& b, const SsimOptions& options) {
  check_same_shape(a, b);
  if (options.window < 1 || options.window % 2 == 0 || !(options.sigma > 0.0)) {
    fail(ErrorKind::InvalidArgument, "SSIM window must be odd and sigma positive");
  }
  if (std::min(a.height(), a.width()) < options.window) {
    fail(ErrorKind::TooSmall, "SSIM needs images of at least " + std::to_string(options.window) + " pixels per side");
  }
  const int H = a.height();
  const int W = a.width();
  if (options.per_channel && a.channels() == 3) {
    double acc = 0.0;
    for (int c = 0; c < 3; ++c) acc += ssim_plane(plane(a, c), plane(b, c), H, W, options);
    return acc / 3.0;
  }
  return ssim_plane(plane(to_luma(a), 0), plane(to_luma(b), 0), H, W, options);
}

FeatureMatrix read_feature_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::MalformedFile, "cannot open feature file " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (bytes.size() < 4 || bytes.compare(0, 4, "FIDF") != 0) return parse_csv_features(bytes, path);

  if (bytes.size() < 12) fail(ErrorKind::MalformedFile, path.string() + ": truncated header");
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  FeatureMatrix m;
  m.n = read_u32_le(p + 4);
  m.d = read_u32_le(p + 8);
  const std::size_t expected = m.n * m.d * 4;
  if (bytes.size() - 12 != expected) {
    fail(ErrorKind::MalformedFile, path.string() + ": payload is " + std::to_string(bytes.size() - 12) +
                                       " bytes, expected " + std::to_string(expected));
  }
  if (m.n == 0 || m.d == 0) fail(ErrorKind::MalformedFile, path.string() + ": empty feature matrix");
  m.values.resize(m.n * m.d);
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    const std::uint32_t bits = read_u32_le(p + 12 + 4 * i);
    float f = 0.0f;
    std::memcpy(&f, &bits, sizeof f);
    if (!std::isfinite(f)) fail(ErrorKind::MalformedFile, path.string() + ": non-finite value");
    m.values[i] = f;
  }
  return m;
}

void write_feature_file(const fs::path& path, const FeatureMatrix& features) {
  if (features.values.size() != features.n * features.d) {
    fail(ErrorKind::InvalidArgument, "feature matrix size mismatch");
  }
  std::string out = "FIDF";
  put_u32_le(out, static_cast<std::uint32_t>(features.n));
  put_u32_le(out, static_cast<std::uint32_t>(features.d));
  for (double v : features.values) {
    const auto f = static_cast<float>(v);
    std::uint32_t bits = 0;
    std::memcpy(&bits, &f, sizeof bits);
    put_u32_le(out, bits);
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) fail(ErrorKind::Io, "cannot write " + path.string());
  file << out;
}

GaussianStats compute_stats(const FeatureMatrix& f) {
  if (f.n < 2) fail(ErrorKind::TooFewSamples, "covariance needs at least 2 samples, got " + std::to_string(f.n));
  if (f.values.size() != f.n * f.d || f.d == 0) fail(ErrorKind::InvalidArgument, "feature matrix size mismatch");
  for (double v : f.values) {
    if (!std::isfinite(v)) fail(ErrorKind::NonFinite, "feature values must be finite");
  }
  GaussianStats s;
  s.dim = f.d;
  s.mean.assign(f.d, 0.0);
  for (std::size_t i = 0; i < f.n; ++i) {
    for (std::size_t j = 0; j < f.d; ++j) s.mean[j] += f.values[i * f.d + j];
  }
  for (double& m : s.mean) m /= static_cast<double>(f.n);

  s.covariance.assign(f.d * f.d, 0.0);
  std::vector<double> centered(f.d);
  for (std::size_t i = 0; i < f.n; ++i) {
    for (std::size_t j = 0; j < f.d; ++j) centered[j] = f.values[i * f.d + j] - s.mean[j];
    for (std::size_t r = 0; r < f.d; ++r) {
      for (std::size_t c = r; c < f.d; ++c) s.covariance[r * f.d + c] += centered[r] * centered[c];
    }
  }
  const double denom = static_cast<double>(f.n - 1);
  for (std::size_t r = 0; r < f.d; ++r) {
    for (std::size_t c = r; c < f.d; ++c) {
      s.covariance[r * f.d + c] /= denom;
      s.covariance[c * f.d + r] = s.covariance[r * f.d + c];
    }
  }
  return s;
}

double frechet_distance(const GaussianStats& a, const GaussianStats& b) {
  check_stats(a, "first");
  check_stats(b, "second");
  if (a.dim != b.dim) fail(ErrorKind::DimMismatch, "statistics have different dimensions");

  double mean_term = 0.0;
  for (std::size_t i = 0; i < a.dim; ++i) {
    const double d = a.mean[i] - b.mean[i];
    mean_term += d * d;
  }

  const Eigen::MatrixXd s1 = as_matrix(a);
  const Eigen::MatrixXd s2 = as_matrix(b);
  psd_eigen(s2, "second covariance");

  // Tr((S1 S2)^1/2) = Tr((R S2 R)^1/2) with R = S1^1/2; the inner product is
  // symmetric PSD, so a symmetric eigensolver applies.
  const auto es1 = psd_eigen(s1, "first covariance");
  const Eigen::VectorXd root = es1.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd r = es1.eigenvectors() * root.asDiagonal() * es1.eigenvectors().transpose();
  Eigen::MatrixXd inner = r * s2 * r;
  inner = 0.5 * (inner + inner.transpose()).eval();
  const auto es = psd_eigen(inner, "covariance product");
  const double trace_sqrt = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();

  const double d = mean_term + s1.trace() + s2.trace() - 2.0 * trace_sqrt;
  // The trace term is a squared Bures distance and never negative; anything
  // below zero is round-off.
  return std::max(d, 0.0);
}

double wra(std::span<const std::string> predicted, std::span<const std::string> target, bool case_sensitive) {
  if (predicted.size() != target.size()) {
    fail(ErrorKind::LengthMismatch, std::to_string(predicted.size()) + " predictions vs " +
                                        std::to_string(target.size()) + " targets");
  }
  if (predicted.empty()) fail(ErrorKind::EmptyLists, "no transcriptions to compare");
  auto equal = [case_sensitive](const std::string& x, const std::string& y) {
    if (case_sensitive) return x == y;
    return x.size() == y.size() && std::equal(x.begin(), x.end(), y.begin(), [](char p, char q) {
             return std::tolower(static_cast<unsigned char>(p)) == std::tolower(static_cast<unsigned char>(q));
           });
  };
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) hits += equal(predicted[i], target[i]) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

std::vector<std::string> read_transcriptions(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::MalformedFile, "cannot open transcription file " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

MetricReport evaluate_dirs(const fs::path& pred_dir, const fs::path& gt_dir, const EvaluateOptions& options) {
  const auto pred_names = png_names(pred_dir);
  const auto gt_names = png_names(gt_dir);

  MetricReport report;
  std::vector<std::string> names;
  std::set_intersection(pred_names.begin(), pred_names.end(), gt_names.begin(), gt_names.end(),
                        std::back_inserter(names));
  std::set_symmetric_difference(pred_names.begin(), pred_names.end(), gt_names.begin(), gt_names.end(),
                                std::back_inserter(report.unmatched));
  if (names.empty()) {
    fail(ErrorKind::NoPairs, "no filenames shared by " + pred_dir.string() + " and " + gt_dir.string() + " (" +
                                 std::to_string(report.unmatched.size()) + " unmatched)");
  }

  report.pairs.resize(names.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    try {
      for (std::size_t i = next++; i < names.size(); i = next++) {
        Image pred = read_image(pred_dir / names[i]);
        Image gt = read_image(gt_dir / names[i]);
        if (pred.dims() != gt.dims()) {
          fail(ErrorKind::PairDimMismatch, names[i] + ": " + std::to_string(pred.height()) + "x" +
                                               std::to_string(pred.width()) + " vs " + std::to_string(gt.height()) +
                                               "x" + std::to_string(gt.width()));
        }
        if (pred.channels() != gt.channels()) {
          pred = expand_gray(pred);
          gt = expand_gray(gt);
        }
        PairMetrics& m = report.pairs[i];
        m.name = names[i];
        m.mse = mse(pred, gt);
        m.psnr_db = psnr(pred, gt);
        m.ssim = ssim(pred, gt, options.ssim);
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      next = names.size();
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(names.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  // Ordered reduction keeps the sums independent of scheduling.
  for (const auto& p : report.pairs) {
    report.mse += p.mse;
    report.ssim += p.ssim;
  }
  report.n_pairs = report.pairs.size();
  report.mse /= static_cast<double>(report.n_pairs);
  report.ssim /= static_cast<double>(report.n_pairs);
  report.psnr_db = aggregate_psnr(report.pairs);

  const bool fid_a = !options.fid_features_a.empty();
  const bool fid_b = !options.fid_features_b.empty();
  if (fid_a != fid_b) fail(ErrorKind::InvalidArgument, "FID needs both feature files");
  if (fid_a) {
    const auto stats_a = compute_stats(read_feature_file(options.fid_features_a));
    const auto stats_b = compute_stats(read_feature_file(options.fid_features_b));
    report.fid = frechet_distance(stats_a, stats_b);
  }

  const bool wra_p = !options.wra_pred.empty();
  const bool wra_t = !options.wra_target.empty();
  if (wra_p != wra_t) fail(ErrorKind::InvalidArgument, "WRA needs both transcription files");
  if (wra_p) {
    const auto pred = read_transcriptions(options.wra_pred);
    const auto target = read_transcriptions(options.wra_target);
    report.wra = wra(pred, target, options.case_sensitive);
  }
  return report;
}

std::string report_to_json(const MetricReport& r) {
  nlohmann::ordered_json j;
  j["mse"] = r.mse;
  if (std::isinf(r.psnr_db)) {
    j["psnr_db"] = "inf";
  } else {
    j["psnr_db"] = r.psnr_db;
  }
  j["ssim"] = r.ssim;
  if (r.fid) j["fid"] = *r.fid;
  if (r.wra) j["wra"] = *r.wra;
  j["n_pairs"] = r.n_pairs;
  j["psnr_cap_db"] = kPsnrCapDb;
  if (!r.unmatched.empty()) j["unmatched"] = r.unmatched;
  return j.dump(2);
}

std::string report_to_csv(const MetricReport& r) {
  std::string out = "mse,psnr_db,ssim,fid,wra,n_pairs\n";
  out += format_number(r.mse) + "," + format_number(r.psnr_db) + "," + format_number(r.ssim) + ",";
  out += (r.fid ? format_number(*r.fid) : std::string()) + ",";
  out += (r.wra ? format_number(*r.wra) : std::string()) + ",";
  out += std::to_string(r.n_pairs) + "\n";
  return out;
}

}  // namespace steforge
