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

#include "steforge/error.hpp"

namespace steforge {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidImage: return "InvalidImage";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::EmptyText: return "EmptyText";
    case ErrorKind::InvalidCharacter: return "InvalidCharacter";
    case ErrorKind::UnknownFont: return "UnknownFont";
    case ErrorKind::TextWiderThanCanvas: return "TextWiderThanCanvas";
    case ErrorKind::AngleOutOfRange: return "AngleOutOfRange";
    case ErrorKind::OffsetOutOfRange: return "OffsetOutOfRange";
    case ErrorKind::DegenerateHomography: return "DegenerateHomography";
    case ErrorKind::NegativeSigma: return "NegativeSigma";
    case ErrorKind::EmptyLexicon: return "EmptyLexicon";
    case ErrorKind::EmptyFontSet: return "EmptyFontSet";
    case ErrorKind::EmptyBackgroundSet: return "EmptyBackgroundSet";
    case ErrorKind::Io: return "IoError";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::CorruptSample: return "CorruptSample";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::LayerMismatch: return "LayerMismatch";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::NonSymmetric: return "NonSymmetric";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::TooSmall: return "TooSmall";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::EmptyLists: return "EmptyLists";
    case ErrorKind::NoPairs: return "NoPairs";
    case ErrorKind::PairDimMismatch: return "PairDimMismatch";
    case ErrorKind::MalformedFile: return "MalformedFile";
  }
  return "Unknown";
}

}  // namespace steforge
