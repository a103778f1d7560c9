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

#include <stdexcept>
#include <string>
#include <string_view>

namespace steforge {

enum class ErrorKind {
  InvalidArgument,
  InvalidImage,
  DimMismatch,
  // text_render
  EmptyText,
  InvalidCharacter,
  UnknownFont,
  TextWiderThanCanvas,
  // geometry
  AngleOutOfRange,
  OffsetOutOfRange,
  DegenerateHomography,
  NegativeSigma,
  // generator_pipeline
  EmptyLexicon,
  EmptyFontSet,
  EmptyBackgroundSet,
  Io,
  IndexOutOfRange,
  CorruptSample,
  Config,
  // losses
  LayerMismatch,
  NonFiniteInput,
  // metrics
  NonSymmetric,
  NotPSD,
  TooSmall,
  TooFewSamples,
  NonFinite,
  LengthMismatch,
  EmptyLists,
  NoPairs,
  PairDimMismatch,
  MalformedFile,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it to a stable exit code without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace steforge
