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

#include "steforge/charset.hpp"

#include <algorithm>
#include <array>

#include "steforge/error.hpp"

namespace steforge {

Charset Charset::letters() { return Charset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"); }

Charset Charset::letters_digits() {
  return Charset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789");
}

Charset::Charset(std::string chars) : chars_(std::move(chars)) {
  if (chars_.empty()) fail(ErrorKind::InvalidArgument, "charset must not be empty");
  std::array<bool, 256> seen{};
  for (char c : chars_) {
    auto& slot = seen[static_cast<unsigned char>(c)];
    if (slot) fail(ErrorKind::InvalidArgument, std::string("duplicate charset character '") + c + "'");
    slot = true;
  }
}

bool Charset::accepts(std::string_view word) const {
  return std::all_of(word.begin(), word.end(), [this](char c) { return contains(c); });
}

std::optional<std::size_t> Charset::index_of(char c) const {
  const auto pos = chars_.find(c);
  if (pos == std::string::npos) return std::nullopt;
  return pos;
}

}  // namespace steforge
