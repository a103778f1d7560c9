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

#include "steforge/data_model.hpp"

#include <cmath>

#include "steforge/error.hpp"

namespace steforge {

namespace {

bool unit(double v) { return v >= 0.0 && v <= 1.0; }
bool unit_rgb(const Rgb& c) { return unit(c[0]) && unit(c[1]) && unit(c[2]); }

}  // namespace

void validate_style(const TextStyle& style) {
  if (style.font_id < 0) fail(ErrorKind::UnknownFont, "negative font id");
  if (style.size <= 0) fail(ErrorKind::InvalidArgument, "text size must be positive");
  if (!unit(style.opacity)) fail(ErrorKind::InvalidArgument, "opacity outside [0,1]");
  if (!unit_rgb(style.fill_color)) fail(ErrorKind::InvalidArgument, "fill color outside [0,1]");
  if (style.border) {
    if (style.border->width < 1) fail(ErrorKind::InvalidArgument, "border width must be >= 1");
    if (!unit_rgb(style.border->color)) fail(ErrorKind::InvalidArgument, "border color outside [0,1]");
  }
  if (style.shadow) {
    if (!unit_rgb(style.shadow->color)) fail(ErrorKind::InvalidArgument, "shadow color outside [0,1]");
    if (!unit(style.shadow->alpha)) fail(ErrorKind::InvalidArgument, "shadow alpha outside [0,1]");
  }
  if (!std::isfinite(style.curve_amplitude) || !std::isfinite(style.curve_period)) {
    fail(ErrorKind::InvalidArgument, "non-finite curve parameters");
  }
  if (style.curve_amplitude != 0.0 && !(style.curve_period > 0.0)) {
    fail(ErrorKind::InvalidArgument, "curve_period must be positive when curve_amplitude != 0");
  }
  if (!(style.blur_sigma >= 0.0)) fail(ErrorKind::NegativeSigma, "blur sigma must be >= 0");
}

std::vector<std::string> validate_tuple(const SampleTuple& s) {
  std::vector<std::string> violations;

  const Dims d = s.i_s.dims();
  const bool dims_ok = s.i_t.dims() == d && s.t_f.dims() == d && s.t_b.dims() == d && s.t_fg.dims() == d &&
                       s.t_sk.dims() == d && s.mask_t.dims() == d && s.mask_s.dims() == d;
  if (!dims_ok) violations.emplace_back("dims_consistent");

  const bool channels_ok = s.i_s.channels() == 3 && s.i_t.channels() == 3 && s.t_f.channels() == 3 &&
                           s.t_b.channels() == 3 && s.t_fg.channels() == 3;
  if (!channels_ok) violations.emplace_back("channels");

  // The remaining checks walk pixels and need consistent shapes.
  if (!dims_ok || !channels_ok) return violations;

  bool subset = true;
  for (std::size_t i = 0; i < s.t_sk.size(); ++i) {
    if (s.t_sk.data()[i] && !s.mask_t.data()[i]) {
      subset = false;
      break;
    }
  }
  if (!subset) violations.emplace_back("skeleton_subset");

  bool clean = true;
  const auto src = s.i_s.data();
  const auto tgt = s.t_f.data();
  for (std::size_t p = 0; p < s.mask_s.size() && clean; ++p) {
    if (s.mask_s.data()[p] || s.mask_t.data()[p]) continue;
    for (std::size_t c = 0; c < 3; ++c) {
      if (src[3 * p + c] != tgt[3 * p + c]) {
        clean = false;
        break;
      }
    }
  }
  if (!clean) violations.emplace_back("clean_background");

  return violations;
}

void validate_config(const GenConfig& c) {
  if (c.canvas.height < 8 || c.canvas.width < 8) fail(ErrorKind::Config, "canvas must be at least 8x8");
  auto check_range = [](const std::array<double, 2>& r, double lo, double hi, const char* name) {
    if (!(r[0] <= r[1]) || r[0] < lo || r[1] > hi) {
      fail(ErrorKind::Config, std::string(name) + " must satisfy " + std::to_string(lo) + " <= lo <= hi <= " +
                                  std::to_string(hi));
    }
  };
  check_range(c.opacity_range, 0.0, 1.0, "opacity_range");
  check_range(c.rotation_range, -45.0, 45.0, "rotation_range");
  check_range(c.size_range, 0.05, 1.0, "size_range");
  check_range(c.blur_sigma_range, 0.0, 10.0, "blur_sigma_range");
  auto check_prob = [](double p, const char* name) {
    if (!unit(p)) fail(ErrorKind::Config, std::string(name) + " must be in [0,1]");
  };
  check_prob(c.curve_probability, "curve_probability");
  check_prob(c.blur_probability, "blur_probability");
  check_prob(c.border_probability, "border_probability");
  check_prob(c.shadow_probability, "shadow_probability");
  const double max_offset = 0.2 * std::min(c.canvas.height, c.canvas.width);
  if (!(c.perspective_max >= 0.0) || c.perspective_max > max_offset) {
    fail(ErrorKind::Config, "perspective_max must be in [0, 0.2 * min(canvas)]");
  }
  if (!(c.curve_amplitude_max >= 0.0)) fail(ErrorKind::Config, "curve_amplitude_max must be >= 0");
}

}  // namespace steforge
