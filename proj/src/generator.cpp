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

#include "steforge/generator.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "steforge/error.hpp"
#include "steforge/ground_truth.hpp"
#include "steforge/png_io.hpp"
#include "steforge/rng.hpp"

namespace steforge {

namespace fs = std::filesystem;

namespace {

Rgb random_color(CounterRng& rng) {
  return {static_cast<float>(rng.uniform()), static_cast<float>(rng.uniform()), static_cast<float>(rng.uniform())};
}

double luma(const Rgb& c) { return 0.299 * c[0] + 0.587 * c[1] + 0.114 * c[2]; }

std::string apply_case(std::string word, std::size_t mode) {
  switch (mode) {
    case 1:  // Capitalized
      if (!word.empty()) word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
      break;
    case 2:  // UPPER
      for (char& c : word) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      break;
    default:
      break;
  }
  return word;
}

// Pushes the fill color away from the background tone so the text stays legible.
void ensure_contrast(TextStyle& style, const Image& bg) {
  double mean = 0.0;
  const auto d = bg.data();
  for (std::size_t p = 0; p + 2 < d.size(); p += 3) mean += 0.299 * d[p] + 0.587 * d[p + 1] + 0.114 * d[p + 2];
  mean /= static_cast<double>(bg.dims().area());
  if (std::abs(luma(style.fill_color) - mean) >= 0.35) return;
  for (float& c : style.fill_color) c = mean > 0.5 ? 0.3f * c : 1.0f - 0.3f * (1.0f - c);
}

std::vector<std::string> read_lexicon(const fs::path& path, const Charset& charset) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot read lexicon " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    std::string word = line.substr(first, last - first + 1);
    if (charset.accepts(word)) words.push_back(std::move(word));
  }
  return words;
}

Image to_rgb(const Image& img) {
  if (img.channels() == 3) return img;
  Image out(img.height(), img.width(), 3);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < 3; ++c) out.at(y, x, c) = img.at(y, x);
    }
  }
  return out;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorKind::Io, "write failed: " + path.string());
}

// Prepares out_dir. A previous dataset (identified by its manifest) is
// replaced; any other non-empty directory is refused.
void prepare_output(const fs::path& out_dir) {
  std::error_code ec;
  if (fs::exists(out_dir, ec)) {
    if (!fs::is_directory(out_dir, ec)) fail(ErrorKind::Io, out_dir.string() + " is not a directory");
    const bool empty = fs::is_empty(out_dir, ec);
    if (!empty) {
      if (!fs::exists(out_dir / "manifest.json")) {
        fail(ErrorKind::Io, out_dir.string() + " is not empty and holds no dataset manifest");
      }
      fs::remove(out_dir / "manifest.json", ec);
      fs::remove(out_dir / "labels.txt", ec);
      for (auto layer : kImageLayers) fs::remove_all(out_dir / layer, ec);
      for (auto layer : kMaskLayers) fs::remove_all(out_dir / layer, ec);
    }
  }
  auto make = [](const fs::path& p) {
    std::error_code e;
    fs::create_directories(p, e);
    if (e) fail(ErrorKind::Io, "cannot create " + p.string() + ": " + e.message());
  };
  make(out_dir);
  for (auto layer : kImageLayers) make(out_dir / layer);
  for (auto layer : kMaskLayers) make(out_dir / layer);
}

void write_sample(const fs::path& out_dir, const std::string& stem, const SampleTuple& t) {
  const std::string file = stem + ".png";
  write_image(out_dir / "i_s" / file, t.i_s);
  write_image(out_dir / "i_t" / file, t.i_t);
  write_image(out_dir / "t_f" / file, t.t_f);
  write_image(out_dir / "t_b" / file, t.t_b);
  write_image(out_dir / "t_fg" / file, t.t_fg);
  write_mask(out_dir / "mask_s" / file, t.mask_s);
  write_mask(out_dir / "mask_t" / file, t.mask_t);
  write_mask(out_dir / "t_sk" / file, t.t_sk);
}

struct WordPair {
  std::string source;
  std::string target;
};

}  // namespace

std::string sample_stem(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%08zu", index);
  return buf;
}

StyleDraw sample_style(std::uint64_t seed, const GenConfig& config, std::size_t font_count,
                       std::size_t background_count, std::span<const std::string> lexicon) {
  if (font_count == 0) fail(ErrorKind::EmptyFontSet, "no fonts available");
  if (background_count == 0) fail(ErrorKind::EmptyBackgroundSet, "no backgrounds available");
  if (lexicon.empty()) fail(ErrorKind::EmptyLexicon, "lexicon has no usable words");

  CounterRng rng(seed);
  StyleDraw draw;
  TextStyle& s = draw.style;

  s.font_id = static_cast<int>(rng.below(font_count));
  s.size = std::max(1, static_cast<int>(std::lround(rng.uniform(config.size_range[0], config.size_range[1]) *
                                                    config.canvas.height)));
  s.fill_color = random_color(rng);
  if (rng.bernoulli(config.border_probability)) {
    Border b;
    b.width = 1 + static_cast<int>(rng.below(2));
    b.color = random_color(rng);
    s.border = b;
  }
  if (rng.bernoulli(config.shadow_probability)) {
    Shadow sh;
    do {
      sh.offset = {static_cast<int>(rng.below(7)) - 3, static_cast<int>(rng.below(7)) - 3};
    } while (sh.offset[0] == 0 && sh.offset[1] == 0);
    sh.color = random_color(rng);
    sh.alpha = static_cast<float>(rng.uniform(0.3, 0.8));
    s.shadow = sh;
  }
  s.opacity = static_cast<float>(rng.uniform(config.opacity_range[0], config.opacity_range[1]));
  // float rounding must not leave the configured range
  s.opacity = std::clamp(s.opacity, static_cast<float>(config.opacity_range[0]),
                         static_cast<float>(config.opacity_range[1]));
  if (s.opacity < config.opacity_range[0]) s.opacity = std::nextafter(s.opacity, 1.0f);
  if (s.opacity > config.opacity_range[1]) s.opacity = std::nextafter(s.opacity, 0.0f);
  s.rotation = rng.uniform(config.rotation_range[0], config.rotation_range[1]);
  if (rng.bernoulli(config.curve_probability) && config.curve_amplitude_max > 0.0) {
    s.curve_amplitude = rng.uniform(-config.curve_amplitude_max, config.curve_amplitude_max);
    s.curve_period = rng.uniform(0.5, 2.0) * config.canvas.width;
    if (s.curve_amplitude == 0.0) s.curve_period = 0.0;
  }
  const double jitter = config.perspective_max / std::sqrt(2.0);
  for (auto& corner : s.perspective_jitter) corner = {rng.uniform(-jitter, jitter), rng.uniform(-jitter, jitter)};
  if (rng.bernoulli(config.blur_probability)) {
    s.blur_sigma = rng.uniform(config.blur_sigma_range[0], config.blur_sigma_range[1]);
  }

  draw.background_index = rng.below(background_count);
  draw.crop_x = rng.uniform();
  draw.crop_y = rng.uniform();

  const std::size_t case_mode = rng.below(3);
  draw.word_source = apply_case(lexicon[rng.below(lexicon.size())], case_mode);
  draw.word_target = apply_case(lexicon[rng.below(lexicon.size())], case_mode);
  return draw;
}

GeneratorResources GeneratorResources::load(const GenConfig& config) {
  GeneratorResources res;
  res.charset = config.include_digits ? Charset::letters_digits() : Charset::letters();

  auto fonts = std::make_shared<FontSet>(FontSet::load_dir(config.font_dir));
  if (fonts->empty()) fail(ErrorKind::EmptyFontSet, "no .ttf/.otf fonts in " + config.font_dir.string());
  res.fonts = std::move(fonts);

  std::error_code ec;
  if (!fs::is_directory(config.background_dir, ec)) {
    fail(ErrorKind::Io, "background directory not found: " + config.background_dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(config.background_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) res.backgrounds.push_back(to_rgb(read_image(f)));
  if (res.backgrounds.empty()) {
    fail(ErrorKind::EmptyBackgroundSet, "no .png backgrounds in " + config.background_dir.string());
  }

  res.lexicon = read_lexicon(config.lexicon, res.charset);
  if (res.lexicon.empty()) fail(ErrorKind::EmptyLexicon, "no charset-valid words in " + config.lexicon.string());
  return res;
}

Image fit_background(const Image& bg, Dims canvas, double crop_x, double crop_y) {
  const Image rgb = to_rgb(bg);
  const int bh = rgb.height();
  const int bw = rgb.width();
  Image out(canvas.height, canvas.width, 3);
  if (bh >= canvas.height && bw >= canvas.width) {
    const int x0 = std::min(bw - canvas.width, static_cast<int>(crop_x * (bw - canvas.width + 1)));
    const int y0 = std::min(bh - canvas.height, static_cast<int>(crop_y * (bh - canvas.height + 1)));
    for (int y = 0; y < canvas.height; ++y) {
      for (int x = 0; x < canvas.width; ++x) {
        for (int c = 0; c < 3; ++c) out.at(y, x, c) = rgb.at(y0 + y, x0 + x, c);
      }
    }
    return out;
  }
  const double sy = static_cast<double>(bh) / canvas.height;
  const double sx = static_cast<double>(bw) / canvas.width;
  for (int y = 0; y < canvas.height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, bh - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, bh - 1);
    const double ty = fy - y0;
    for (int x = 0; x < canvas.width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, bw - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, bw - 1);
      const double tx = fx - x0;
      for (int c = 0; c < 3; ++c) {
        const double v = (1 - ty) * ((1 - tx) * rgb.at(y0, x0, c) + tx * rgb.at(y0, x1, c)) +
                         ty * ((1 - tx) * rgb.at(y1, x0, c) + tx * rgb.at(y1, x1, c));
        out.at(y, x, c) = static_cast<float>(std::clamp(v, 0.0, 1.0));
      }
    }
  }
  return out;
}

std::string manifest_to_json(const DatasetManifest& m) {
  nlohmann::ordered_json j;
  j["count"] = m.count;
  j["canvas"] = {m.canvas.height, m.canvas.width};
  j["master_seed"] = m.master_seed;
  j["charset"] = m.charset;
  j["generator_version"] = m.generator_version;
  if (!m.skipped.empty()) j["skipped"] = m.skipped;
  return j.dump();
}

DatasetManifest manifest_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    DatasetManifest m;
    m.count = j.at("count").get<std::size_t>();
    const auto canvas = j.at("canvas");
    m.canvas = {canvas.at(0).get<int>(), canvas.at(1).get<int>()};
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    m.charset = j.at("charset").get<std::string>();
    m.generator_version = j.at("generator_version").get<std::string>();
    if (j.contains("skipped")) m.skipped = j.at("skipped").get<std::vector<std::size_t>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::CorruptSample, std::string("malformed manifest: ") + e.what());
  }
}

std::optional<BuiltSample> build_sample(const GenConfig& config, const GeneratorResources& resources,
                                        std::size_t index, const FontRasterizer& rasterizer) {
  for (int retry = 0; retry <= kMaxRetries; ++retry) {
    const std::uint64_t seed = sample_seed(config.master_seed, index, static_cast<std::uint64_t>(retry));
    StyleDraw draw =
        sample_style(seed, config, resources.fonts->size(), resources.backgrounds.size(), resources.lexicon);
    const Image bg =
        fit_background(resources.backgrounds[draw.background_index], config.canvas, draw.crop_x, draw.crop_y);
    ensure_contrast(draw.style, bg);
    try {
      AssembledSample sample =
          assemble_sample(bg, draw.style, draw.word_source, draw.word_target, rasterizer, resources.charset);
      return BuiltSample{std::move(sample), std::move(draw), retry};
    } catch (const Error& e) {
      // Rendering failures (e.g. a word too long for the canvas) get a fresh draw.
      if (e.kind() == ErrorKind::Io) throw;
    }
  }
  return std::nullopt;
}

DatasetManifest generate_dataset(const GenConfig& config, std::size_t count, const fs::path& out_dir,
                                 const GenerateOptions& options) {
  validate_config(config);
  const GeneratorResources resources = GeneratorResources::load(config);
  return generate_dataset(config, resources, count, out_dir, options);
}

DatasetManifest generate_dataset(const GenConfig& config, const GeneratorResources& resources, std::size_t count,
                                 const fs::path& out_dir, const GenerateOptions& options) {
  validate_config(config);
  prepare_output(out_dir);

  std::vector<std::optional<WordPair>> results(count);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::atomic<bool> abort{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&] {
    try {
      // Providers are per-thread; the font bytes behind them are shared.
      const StbFontRasterizer rasterizer(resources.fonts);
      for (std::size_t i = next++; i < count && !abort; i = next++) {
        if (auto built = build_sample(config, resources, i, rasterizer)) {
          write_sample(out_dir, sample_stem(i), built->sample.tuple);
          results[i] = WordPair{built->sample.tuple.word_source, built->sample.tuple.word_target};
        }
        const std::size_t finished = ++done;
        if (options.progress) options.progress(finished, count);
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
      abort = true;
    }
  };

  const unsigned threads = std::max(1u, options.threads);
  if (threads == 1 || count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(threads, count); ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  // Close gaps left by skipped samples so written indices stay contiguous.
  DatasetManifest manifest;
  manifest.canvas = config.canvas;
  manifest.master_seed = config.master_seed;
  manifest.charset = resources.charset.chars();
  std::string labels;
  std::size_t written = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (!results[i]) {
      manifest.skipped.push_back(i);
      continue;
    }
    if (written != i) {
      const std::string from = sample_stem(i) + ".png";
      const std::string to = sample_stem(written) + ".png";
      for (auto layer : kImageLayers) fs::rename(out_dir / layer / from, out_dir / layer / to);
      for (auto layer : kMaskLayers) fs::rename(out_dir / layer / from, out_dir / layer / to);
    }
    labels += sample_stem(written) + "\t" + results[i]->source + "\t" + results[i]->target + "\n";
    ++written;
  }
  manifest.count = written;

  write_text_file(out_dir / "labels.txt", labels);
  write_text_file(out_dir / "manifest.json", manifest_to_json(manifest));
  return manifest;
}

DatasetManifest read_manifest(const fs::path& dataset_dir) {
  const fs::path path = dataset_dir / "manifest.json";
  std::ifstream in(path);
  if (!in) fail(ErrorKind::CorruptSample, "missing manifest " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return manifest_from_json(buffer.str());
}

SampleTuple read_sample(const fs::path& dataset_dir, std::size_t index) {
  const DatasetManifest manifest = read_manifest(dataset_dir);
  if (index >= manifest.count) {
    fail(ErrorKind::IndexOutOfRange,
         "sample " + std::to_string(index) + " >= count " + std::to_string(manifest.count));
  }
  const std::string file = sample_stem(index) + ".png";

  auto layer_path = [&](std::string_view layer) {
    fs::path p = dataset_dir / layer / file;
    if (!fs::exists(p)) fail(ErrorKind::CorruptSample, "missing layer " + std::string(layer) + " (" + p.string() + ")");
    return p;
  };
  auto load_image = [&](std::string_view layer) {
    Image img;
    try {
      img = read_image(layer_path(layer));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::CorruptSample) throw;
      fail(ErrorKind::CorruptSample, "layer " + std::string(layer) + ": " + e.what());
    }
    if (img.dims() != manifest.canvas || img.channels() != 3) {
      fail(ErrorKind::CorruptSample, "layer " + std::string(layer) + " has wrong shape");
    }
    return img;
  };
  auto load_mask = [&](std::string_view layer) {
    Mask m;
    try {
      m = read_mask(layer_path(layer));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::CorruptSample) throw;
      fail(ErrorKind::CorruptSample, "layer " + std::string(layer) + ": " + e.what());
    }
    if (m.dims() != manifest.canvas) fail(ErrorKind::CorruptSample, "layer " + std::string(layer) + " has wrong shape");
    return m;
  };

  SampleTuple t;
  t.i_s = load_image("i_s");
  t.i_t = load_image("i_t");
  t.t_f = load_image("t_f");
  t.t_b = load_image("t_b");
  t.t_fg = load_image("t_fg");
  t.mask_s = load_mask("mask_s");
  t.mask_t = load_mask("mask_t");
  t.t_sk = load_mask("t_sk");

  std::ifstream labels(dataset_dir / "labels.txt");
  if (!labels) fail(ErrorKind::CorruptSample, "missing labels.txt");
  const std::string stem = sample_stem(index);
  std::string line;
  while (std::getline(labels, line)) {
    if (line.compare(0, stem.size() + 1, stem + "\t") != 0) continue;
    const auto tab = line.find('\t', stem.size() + 1);
    if (tab == std::string::npos) fail(ErrorKind::CorruptSample, "malformed label line for " + stem);
    t.word_source = line.substr(stem.size() + 1, tab - stem.size() - 1);
    t.word_target = line.substr(tab + 1);
    return t;
  }
  fail(ErrorKind::CorruptSample, "no label line for " + stem);
}

}  // namespace steforge
