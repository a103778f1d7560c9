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
 * @file cli.hpp
 * @brief Entry point of the ste_forge command-line tool.
 *
 * Exit codes:
 *   0  success
 *   1  unexpected internal failure
 *   2  usage, configuration or argument error
 *   3  file-system or image I/O error
 *   4  evaluation found no filename pairs
 *   5  malformed feature or transcription file
 *   6  invalid image content (e.g. non-binary mask, mismatched sizes)
 */

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "steforge/error.hpp"

namespace steforge {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitNoPairs = 4;
inline constexpr int kExitMalformed = 5;
inline constexpr int kExitInvalidImage = 6;

/// Maps a library error onto the documented exit code.
int exit_code_for(ErrorKind kind);

/// Runs the tool. `args` excludes the program name. Payloads go to `out`,
/// diagnostics and progress to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace steforge
