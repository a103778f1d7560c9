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

#include "steforge/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "steforge/error.hpp"

namespace steforge {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Drops a '#' comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

struct Parser {
  std::string key;
  int line_no = 0;

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::Config, "line " + std::to_string(line_no) + " (" + key + "): " + what);
  }

  double number(std::string_view v) const {
    v = trim(v);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) error("expected a number, got '" + std::string(v) + "'");
    return out;
  }

  std::uint64_t unsigned_integer(std::string_view v) const {
    v = trim(v);
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
      error("expected an unsigned 64-bit integer, got '" + std::string(v) + "'");
    }
    return out;
  }

  std::string string(std::string_view v) const {
    v = trim(v);
    if (v.size() < 2 || v.front() != '"' || v.back() != '"') error("expected a quoted string");
    return std::string(v.substr(1, v.size() - 2));
  }

  bool boolean(std::string_view v) const {
    v = trim(v);
    if (v == "true") return true;
    if (v == "false") return false;
    error("expected true or false");
  }

  std::array<double, 2> pair(std::string_view v) const {
    v = trim(v);
    if (v.size() < 2 || v.front() != '[' || v.back() != ']') error("expected [a, b]");
    const auto inner = v.substr(1, v.size() - 2);
    const auto comma = inner.find(',');
    if (comma == std::string_view::npos || inner.find(',', comma + 1) != std::string_view::npos) {
      error("expected exactly two elements");
    }
    return {number(inner.substr(0, comma)), number(inner.substr(comma + 1))};
  }
};

}  // namespace

GenConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  GenConfig config;
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };

  Parser parser;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++parser.line_no;
    const auto line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorKind::Config, "line " + std::to_string(parser.line_no) + ": missing '='");
    }
    parser.key = std::string(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    const std::string& key = parser.key;

    if (key == "canvas") {
      const auto c = parser.pair(value);
      if (c[0] != static_cast<int>(c[0]) || c[1] != static_cast<int>(c[1])) parser.error("canvas must be integers");
      config.canvas = {static_cast<int>(c[0]), static_cast<int>(c[1])};
    } else if (key == "font_dir") {
      config.font_dir = resolve(parser.string(value));
    } else if (key == "background_dir") {
      config.background_dir = resolve(parser.string(value));
    } else if (key == "lexicon") {
      config.lexicon = resolve(parser.string(value));
    } else if (key == "opacity_range") {
      config.opacity_range = parser.pair(value);
    } else if (key == "rotation_range") {
      config.rotation_range = parser.pair(value);
    } else if (key == "curve_probability") {
      config.curve_probability = parser.number(value);
    } else if (key == "blur_probability") {
      config.blur_probability = parser.number(value);
    } else if (key == "master_seed") {
      config.master_seed = parser.unsigned_integer(value);
    } else if (key == "size_range") {
      config.size_range = parser.pair(value);
    } else if (key == "blur_sigma_range") {
      config.blur_sigma_range = parser.pair(value);
    } else if (key == "border_probability") {
      config.border_probability = parser.number(value);
    } else if (key == "shadow_probability") {
      config.shadow_probability = parser.number(value);
    } else if (key == "perspective_max") {
      config.perspective_max = parser.number(value);
    } else if (key == "curve_amplitude_max") {
      config.curve_amplitude_max = parser.number(value);
    } else if (key == "include_digits") {
      config.include_digits = parser.boolean(value);
    } else {
      parser.error("unknown key");
    }
  }
  validate_config(config);
  return config;
}

GenConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Config, "cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path());
}

}  // namespace steforge
