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

#include "steforge/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "steforge/error.hpp"

namespace steforge {

namespace {

enum class Edge { Zero, Clamp };

// Bilinear read of channel c at (x, y) in pixel-center coordinates.
double sample(const Image& img, int c, double x, double y, Edge edge) {
  const int W = img.width();
  const int H = img.height();
  const double fx0 = std::floor(x);
  const double fy0 = std::floor(y);
  const double tx = x - fx0;
  const double ty = y - fy0;
  // Far outside: nothing to interpolate.
  if (edge == Edge::Zero && (fx0 < -1.0 || fy0 < -1.0 || fx0 > W || fy0 > H)) return 0.0;
  const int x0 = static_cast<int>(std::clamp(fx0, -2.0, static_cast<double>(W) + 1.0));
  const int y0 = static_cast<int>(std::clamp(fy0, -2.0, static_cast<double>(H) + 1.0));

  auto tap = [&](int xi, int yi) -> double {
    if (edge == Edge::Clamp) {
      xi = std::clamp(xi, 0, W - 1);
      yi = std::clamp(yi, 0, H - 1);
    } else if (xi < 0 || yi < 0 || xi >= W || yi >= H) {
      return 0.0;
    }
    return img.at(yi, xi, c);
  };

  double v = 0.0;
  const double w00 = (1.0 - tx) * (1.0 - ty);
  const double w10 = tx * (1.0 - ty);
  const double w01 = (1.0 - tx) * ty;
  const double w11 = tx * ty;
  if (w00 != 0.0) v += w00 * tap(x0, y0);
  if (w10 != 0.0) v += w10 * tap(x0 + 1, y0);
  if (w01 != 0.0) v += w01 * tap(x0, y0 + 1);
  if (w11 != 0.0) v += w11 * tap(x0 + 1, y0 + 1);
  return v;
}

// Resamples both planes through an output -> source coordinate map.
template <typename InverseMap>
GlyphLayer resample(const GlyphLayer& layer, InverseMap&& inverse) {
  const int H = layer.alpha.height();
  const int W = layer.alpha.width();
  GlyphLayer out{Image(H, W, 3), Image(H, W, 1)};
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const auto [sx, sy] = inverse(static_cast<double>(x), static_cast<double>(y));
      out.alpha.at(y, x) = static_cast<float>(std::clamp(sample(layer.alpha, 0, sx, sy, Edge::Zero), 0.0, 1.0));
      for (int c = 0; c < 3; ++c) {
        out.color.at(y, x, c) = static_cast<float>(std::clamp(sample(layer.color, c, sx, sy, Edge::Clamp), 0.0, 1.0));
      }
    }
  }
  return out;
}

// cos/sin that are exact at multiples of 90 degrees.
std::pair<double, double> cos_sin_degrees(double degrees) {
  const double quarter = degrees / 90.0;
  if (quarter == std::round(quarter)) {
    switch (((static_cast<long long>(quarter) % 4) + 4) % 4) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double rad = degrees * std::numbers::pi / 180.0;
  return {std::cos(rad), std::sin(rad)};
}

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

std::array<double, 9> invert3(const Homography& m) {
  const double a = m[0], b = m[1], c = m[2];
  const double d = m[3], e = m[4], f = m[5];
  const double g = m[6], h = m[7], i = m[8];
  const double A = e * i - f * h;
  const double B = -(d * i - f * g);
  const double C = d * h - e * g;
  const double det = a * A + b * B + c * C;
  if (std::abs(det) < 1e-12) fail(ErrorKind::DegenerateHomography, "homography is singular");
  const double inv = 1.0 / det;
  return {A * inv,
          -(b * i - c * h) * inv,
          (b * f - c * e) * inv,
          B * inv,
          (a * i - c * g) * inv,
          -(a * f - c * d) * inv,
          C * inv,
          -(a * h - b * g) * inv,
          (a * e - b * d) * inv};
}

std::vector<double> kernel_1d(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = v;
    sum += v;
  }
  for (double& v : k) v /= sum;
  return k;
}

}  // namespace

GlyphLayer rotate(const GlyphLayer& layer, double degrees) {
  if (!std::isfinite(degrees) || std::abs(degrees) > kMaxRotationDegrees) {
    fail(ErrorKind::AngleOutOfRange, "rotation " + std::to_string(degrees) + " outside [-180, 180]");
  }
  if (degrees == 0.0) return layer;
  const double cx = (layer.alpha.width() - 1) / 2.0;
  const double cy = (layer.alpha.height() - 1) / 2.0;
  const auto [cs, sn] = cos_sin_degrees(degrees);
  // Positive angles turn the content counter-clockwise on screen (y down).
  return resample(layer, [&](double x, double y) {
    const double dx = x - cx;
    const double dy = y - cy;
    return std::pair{cx + cs * dx - sn * dy, cy + sn * dx + cs * dy};
  });
}

Homography homography_from_corners(const std::array<Vec2, 4>& src, const std::array<Vec2, 4>& dst) {
  for (int i = 0; i < 4; ++i) {
    const Vec2& a = dst[static_cast<std::size_t>(i)];
    const Vec2& b = dst[static_cast<std::size_t>((i + 1) % 4)];
    const Vec2& c = dst[static_cast<std::size_t>((i + 2) % 4)];
    if (std::abs(cross(a, b, c)) < 1e-9) {
      fail(ErrorKind::DegenerateHomography, "three target corners are collinear");
    }
  }

  // Unknowns h0..h7 with h8 = 1; two equations per correspondence.
  double m[8][9] = {};
  for (int i = 0; i < 4; ++i) {
    const auto& s = src[static_cast<std::size_t>(i)];
    const auto& d = dst[static_cast<std::size_t>(i)];
    double* r0 = m[2 * i];
    double* r1 = m[2 * i + 1];
    r0[0] = s.x, r0[1] = s.y, r0[2] = 1.0, r0[6] = -d.x * s.x, r0[7] = -d.x * s.y, r0[8] = d.x;
    r1[3] = s.x, r1[4] = s.y, r1[5] = 1.0, r1[6] = -d.y * s.x, r1[7] = -d.y * s.y, r1[8] = d.y;
  }
  for (int col = 0; col < 8; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 8; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    }
    if (std::abs(m[pivot][col]) < 1e-12) fail(ErrorKind::DegenerateHomography, "singular corner system");
    if (pivot != col) std::swap(m[pivot], m[col]);
    for (int r = 0; r < 8; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      if (f == 0.0) continue;
      for (int k = col; k < 9; ++k) m[r][k] -= f * m[col][k];
    }
  }
  Homography h{};
  for (int i = 0; i < 8; ++i) h[static_cast<std::size_t>(i)] = m[i][8] / m[i][i];
  h[8] = 1.0;
  return h;
}

GlyphLayer perspective_warp(const GlyphLayer& layer, const std::array<Vec2, 4>& corner_offsets) {
  const int H = layer.alpha.height();
  const int W = layer.alpha.width();
  for (const auto& o : corner_offsets) {
    if (!std::isfinite(o.x) || !std::isfinite(o.y)) fail(ErrorKind::OffsetOutOfRange, "non-finite corner offset");
  }

  // Degeneracy is reported ahead of the magnitude limit so a collapsed target
  // quad is always named as such.
  const std::array<Vec2, 4> src{Vec2{0.0, 0.0}, Vec2{W - 1.0, 0.0}, Vec2{W - 1.0, H - 1.0}, Vec2{0.0, H - 1.0}};
  std::array<Vec2, 4> dst;
  for (std::size_t i = 0; i < 4; ++i) dst[i] = {src[i].x + corner_offsets[i].x, src[i].y + corner_offsets[i].y};
  const Homography forward = homography_from_corners(src, dst);

  const double limit = 0.2 * std::min(H, W);
  bool identity = true;
  for (const auto& o : corner_offsets) {
    if (std::hypot(o.x, o.y) > limit) {
      fail(ErrorKind::OffsetOutOfRange, "corner offset exceeds 0.2 * min(H, W) = " + std::to_string(limit));
    }
    identity = identity && o.x == 0.0 && o.y == 0.0;
  }
  if (identity) return layer;

  const auto inv = invert3(forward);
  return resample(layer, [&](double x, double y) {
    const double w = inv[6] * x + inv[7] * y + inv[8];
    return std::pair{(inv[0] * x + inv[1] * y + inv[2]) / w, (inv[3] * x + inv[4] * y + inv[5]) / w};
  });
}

Image gaussian_blur(const Image& img, double sigma) {
  if (!(sigma >= 0.0)) fail(ErrorKind::NegativeSigma, "sigma must be >= 0");
  if (sigma == 0.0) return img;

  const std::vector<double> k = kernel_1d(sigma);
  const int radius = static_cast<int>(k.size() / 2);
  const int H = img.height();
  const int W = img.width();
  const int C = img.channels();

  std::vector<double> tmp(img.size());
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      for (int c = 0; c < C; ++c) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i) {
          const int sx = std::clamp(x + i, 0, W - 1);
          acc += k[static_cast<std::size_t>(i + radius)] * img.at(y, sx, c);
        }
        tmp[img.index(y, x, c)] = acc;
      }
    }
  }
  Image out(H, W, C);
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      for (int c = 0; c < C; ++c) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i) {
          const int sy = std::clamp(y + i, 0, H - 1);
          acc += k[static_cast<std::size_t>(i + radius)] * tmp[img.index(sy, x, c)];
        }
        out.at(y, x, c) = static_cast<float>(std::clamp(acc, 0.0, 1.0));
      }
    }
  }
  return out;
}

GlyphLayer gaussian_blur(const GlyphLayer& layer, double sigma) {
  return {gaussian_blur(layer.color, sigma), gaussian_blur(layer.alpha, sigma)};
}

GlyphLayer apply_style_geometry(const GlyphLayer& layer, const TextStyle& style) {
  GlyphLayer out = layer;
  if (style.rotation != 0.0) out = rotate(out, style.rotation);
  const bool warp = std::any_of(style.perspective_jitter.begin(), style.perspective_jitter.end(),
                                [](const Vec2& v) { return v.x != 0.0 || v.y != 0.0; });
  if (warp) out = perspective_warp(out, style.perspective_jitter);
  if (style.blur_sigma > 0.0) out = gaussian_blur(out, style.blur_sigma);
  return out;
}

}  // namespace steforge
