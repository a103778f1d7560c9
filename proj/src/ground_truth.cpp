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

#include "steforge/ground_truth.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "steforge/error.hpp"
#include "steforge/geometry.hpp"

namespace steforge {

namespace {

// Neighbour offsets P2..P9, clockwise starting north.
constexpr std::array<int, 8> kDy{-1, -1, 0, 1, 1, 1, 0, -1};
constexpr std::array<int, 8> kDx{0, 1, 1, 1, 0, -1, -1, -1};

// Deletion decision for both Zhang-Suen sub-iterations, indexed by the 8-bit
// neighbourhood code (bit k set when neighbour P(k+2) is foreground).
struct ThinningTable {
  std::array<bool, 256> first{};
  std::array<bool, 256> second{};

  ThinningTable() {
    for (int code = 0; code < 256; ++code) {
      std::array<int, 8> p{};
      for (int k = 0; k < 8; ++k) p[static_cast<std::size_t>(k)] = (code >> k) & 1;
      const int b = std::accumulate(p.begin(), p.end(), 0);
      int a = 0;
      for (int k = 0; k < 8; ++k) {
        if (p[static_cast<std::size_t>(k)] == 0 && p[static_cast<std::size_t>((k + 1) % 8)] == 1) ++a;
      }
      const bool common = b >= 2 && b <= 6 && a == 1;
      // p[0]=P2 (N), p[2]=P4 (E), p[4]=P6 (S), p[6]=P8 (W)
      first[static_cast<std::size_t>(code)] = common && p[0] * p[2] * p[4] == 0 && p[2] * p[4] * p[6] == 0;
      second[static_cast<std::size_t>(code)] = common && p[0] * p[2] * p[6] == 0 && p[0] * p[4] * p[6] == 0;
    }
  }
};

const ThinningTable& thinning_table() {
  static const ThinningTable table;
  return table;
}

int neighbourhood(const Mask& m, int y, int x) {
  int code = 0;
  for (int k = 0; k < 8; ++k) {
    if (m.get(y + kDy[static_cast<std::size_t>(k)], x + kDx[static_cast<std::size_t>(k)])) code |= 1 << k;
  }
  return code;
}

// Labels 8-connected components 1..n in raster order of their first pixel.
std::vector<int> label_components(const Mask& m, int& count) {
  const int H = m.height();
  const int W = m.width();
  std::vector<int> label(m.size(), 0);
  std::vector<std::pair<int, int>> stack;
  count = 0;
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      if (!m.at(y, x) || label[m.index(y, x)]) continue;
      ++count;
      label[m.index(y, x)] = count;
      stack.emplace_back(y, x);
      while (!stack.empty()) {
        const auto [cy, cx] = stack.back();
        stack.pop_back();
        for (int k = 0; k < 8; ++k) {
          const int ny = cy + kDy[static_cast<std::size_t>(k)];
          const int nx = cx + kDx[static_cast<std::size_t>(k)];
          if (!m.get(ny, nx) || label[m.index(ny, nx)]) continue;
          label[m.index(ny, nx)] = count;
          stack.emplace_back(ny, nx);
        }
      }
    }
  }
  return label;
}

}  // namespace

Mask extract_mask(const Image& alpha, float threshold) {
  if (alpha.channels() != 1) fail(ErrorKind::InvalidArgument, "extract_mask expects a single-channel coverage raster");
  Mask out(alpha.height(), alpha.width());
  const auto src = alpha.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] > threshold ? 1 : 0;
  return out;
}

Mask invert_mask(const Mask& mask) {
  Mask out = mask;
  for (auto& v : out.data()) v = static_cast<std::uint8_t>(1 - v);
  return out;
}

Mask skeletonize(const Mask& mask) {
  const auto& table = thinning_table();
  const int H = mask.height();
  const int W = mask.width();
  Mask out = mask;
  std::vector<std::size_t> doomed;

  auto pass = [&](const std::array<bool, 256>& rule) {
    doomed.clear();
    for (int y = 0; y < H; ++y) {
      for (int x = 0; x < W; ++x) {
        if (out.at(y, x) && rule[static_cast<std::size_t>(neighbourhood(out, y, x))]) doomed.push_back(out.index(y, x));
      }
    }
    for (std::size_t i : doomed) out.data()[i] = 0;
    return !doomed.empty();
  };

  for (;;) {
    const bool a = pass(table.first);
    const bool b = pass(table.second);
    if (!a && !b) break;
  }

  // Thinning erases 2x2 blocks outright. Keep one pixel (the first in raster
  // order) of any component that vanished so the component count survives.
  int n_in = 0;
  const std::vector<int> labels = label_components(mask, n_in);
  std::vector<char> survived(static_cast<std::size_t>(n_in) + 1, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (out.data()[i]) survived[static_cast<std::size_t>(labels[i])] = 1;
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto l = static_cast<std::size_t>(labels[i]);
    if (l != 0 && !survived[l]) {
      out.data()[i] = 1;
      survived[l] = 1;
    }
  }
  return out;
}

Image mask_multiply(const Image& img, const Mask& mask) {
  if (img.dims() != mask.dims()) fail(ErrorKind::DimMismatch, "image and mask dimensions differ");
  Image out = img;
  auto dst = out.data();
  const auto m = mask.data();
  const auto C = static_cast<std::size_t>(img.channels());
  for (std::size_t p = 0; p < m.size(); ++p) {
    if (m[p]) continue;
    for (std::size_t c = 0; c < C; ++c) dst[p * C + c] = 0.0f;
  }
  return out;
}

int count_components(const Mask& mask) {
  int n = 0;
  label_components(mask, n);
  return n;
}

AssembledSample assemble_sample(const Image& background, const TextStyle& style, std::string_view word_source,
                                std::string_view word_target, const FontRasterizer& rasterizer,
                                const Charset& charset) {
  if (background.channels() != 3) fail(ErrorKind::InvalidArgument, "background must have 3 channels");
  const Dims canvas = background.dims();

  AssembledSample out;
  out.source_layer = apply_style_geometry(rasterize_text(word_source, style, canvas, rasterizer, charset), style);
  out.target_layer = apply_style_geometry(rasterize_text(word_target, style, canvas, rasterizer, charset), style);

  SampleTuple& t = out.tuple;
  t.i_s = composite(out.source_layer, background);
  t.t_f = composite(out.target_layer, background);
  t.t_b = background;
  t.t_fg = composite(out.target_layer, Image(canvas.height, canvas.width, 3, kNeutralGray));
  t.i_t = render_content_image(word_target, canvas);
  t.mask_s = extract_mask(out.source_layer.alpha, kStrokeCoverageThreshold);
  t.mask_t = extract_mask(out.target_layer.alpha, kStrokeCoverageThreshold);
  t.t_sk = skeletonize(t.mask_t);
  t.word_source = std::string(word_source);
  t.word_target = std::string(word_target);

  if (const auto violations = validate_tuple(t); !violations.empty()) {
    throw std::logic_error("assembled tuple violates " + violations.front());
  }
  return out;
}

}  // namespace steforge
