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

// Helpers shared by the unit and acceptance tests: fixture paths, scratch
// directories, random rasters and independent reference implementations.

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "steforge/data_model.hpp"
#include "steforge/image.hpp"

namespace testing {

namespace fs = std::filesystem;

inline fs::path asset_dir() { return fs::path(STE_FORGE_ASSET_DIR); }

inline steforge::GenConfig asset_config(std::uint64_t seed = 0) {
  steforge::GenConfig c;
  c.font_dir = asset_dir() / "fonts";
  c.background_dir = asset_dir() / "backgrounds";
  c.lexicon = asset_dir() / "lexicon.txt";
  c.master_seed = seed;
  return c;
}

/// Unique scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            ("steforge_" + tag + "_" + std::to_string(rd()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& leaf) const { return path_ / leaf; }

 private:
  fs::path path_;
};

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Relative path -> file bytes for every regular file below `root`.
inline std::map<std::string, std::string> tree_contents(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = slurp(e.path());
  }
  return out;
}

/// FNV-1a over the sorted (path, bytes) pairs of a directory tree.
inline std::uint64_t tree_hash(const fs::path& root) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
    h ^= 0xff;
    h *= 0x100000001b3ull;
  };
  for (const auto& [name, bytes] : tree_contents(root)) {
    mix(name);
    mix(bytes);
  }
  return h;
}

inline steforge::Image random_image(std::mt19937_64& rng, int h, int w, int c) {
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  std::vector<float> v(static_cast<std::size_t>(h) * static_cast<std::size_t>(w) * static_cast<std::size_t>(c));
  for (float& x : v) x = u(rng);
  return steforge::Image(h, w, c, std::move(v));
}

/// Blobby random mask: a union of filled rectangles and disks, so thinning
/// has real work to do (unlike salt-and-pepper noise).
inline steforge::Mask random_blob_mask(std::mt19937_64& rng, int h, int w) {
  steforge::Mask m(h, w);
  std::uniform_int_distribution<int> shapes(1, 6);
  std::uniform_int_distribution<int> ry(0, h - 1), rx(0, w - 1), extent(1, std::max(2, std::min(h, w) / 2));
  const int n = shapes(rng);
  for (int s = 0; s < n; ++s) {
    const int cy = ry(rng), cx = rx(rng), a = extent(rng), b = extent(rng);
    const bool disk = (rng() & 1) != 0;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const int dy = y - cy, dx = x - cx;
        const bool inside = disk ? dx * dx + dy * dy <= a * a : (std::abs(dy) <= a / 2 && std::abs(dx) <= b);
        if (inside) m.at(y, x) = 1;
      }
    }
  }
  return m;
}

/// Reference Zhang-Suen thinning written against a coordinate set rather than
/// a raster, with the neighbour conditions spelled out term by term. Whole
/// components that thinning erases (2x2 blocks) keep their first pixel in
/// raster order, so the component count is preserved.
inline steforge::Mask reference_thinning(const steforge::Mask& input) {
  using Pt = std::pair<int, int>;  // (y, x); std::set orders it in raster order
  std::set<Pt> on;
  for (int y = 0; y < input.height(); ++y) {
    for (int x = 0; x < input.width(); ++x) {
      if (input.at(y, x)) on.insert({y, x});
    }
  }
  auto px = [&on](int y, int x) { return on.count({y, x}) ? 1 : 0; };

  bool changed = true;
  while (changed) {
    changed = false;
    for (int step = 0; step < 2; ++step) {
      std::vector<Pt> remove;
      for (const auto& [y, x] : on) {
        const int p2 = px(y - 1, x), p3 = px(y - 1, x + 1), p4 = px(y, x + 1), p5 = px(y + 1, x + 1);
        const int p6 = px(y + 1, x), p7 = px(y + 1, x - 1), p8 = px(y, x - 1), p9 = px(y - 1, x - 1);
        const int b = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9;
        const int a = (!p2 && p3) + (!p3 && p4) + (!p4 && p5) + (!p5 && p6) + (!p6 && p7) + (!p7 && p8) +
                      (!p8 && p9) + (!p9 && p2);
        if (b < 2 || b > 6 || a != 1) continue;
        const bool c1 = step == 0 ? p2 * p4 * p6 == 0 : p2 * p4 * p8 == 0;
        const bool c2 = step == 0 ? p4 * p6 * p8 == 0 : p2 * p6 * p8 == 0;
        if (c1 && c2) remove.push_back({y, x});
      }
      for (const auto& p : remove) on.erase(p);
      changed = changed || !remove.empty();
    }
  }

  // Flood-fill the original components and restore any that disappeared.
  std::set<Pt> unvisited;
  for (int y = 0; y < input.height(); ++y) {
    for (int x = 0; x < input.width(); ++x) {
      if (input.at(y, x)) unvisited.insert({y, x});
    }
  }
  while (!unvisited.empty()) {
    const Pt seed = *unvisited.begin();
    std::vector<Pt> stack{seed};
    unvisited.erase(seed);
    bool survives = false;
    while (!stack.empty()) {
      const Pt p = stack.back();
      stack.pop_back();
      survives = survives || on.count(p) > 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const Pt q{p.first + dy, p.second + dx};
          if (unvisited.erase(q)) stack.push_back(q);
        }
      }
    }
    if (!survives) on.insert(seed);
  }

  steforge::Mask out(input.height(), input.width());
  for (const auto& [y, x] : on) out.at(y, x) = 1;
  return out;
}

}  // namespace testing
