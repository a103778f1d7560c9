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

#pragma once

#include <filesystem>
#include <string_view>

#include "steforge/data_model.hpp"

namespace steforge {

/// Parses a flat TOML-style file:
///
///   # comment
///   canvas = [64, 256]
///   font_dir = "fonts"
///   opacity_range = [0.6, 1.0]
///   master_seed = 7
///
/// Keys are GenConfig field names. Relative paths resolve against `base_dir`.
/// Unknown keys, malformed values and invalid ranges throw Error(Config).
GenConfig parse_config(std::string_view text, const std::filesystem::path& base_dir);

/// Reads and parses `path`; relative paths resolve against its directory.
GenConfig load_config(const std::filesystem::path& path);

}  // namespace steforge
