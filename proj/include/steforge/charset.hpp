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

#include <optional>
#include <string>
#include <string_view>

namespace steforge {

/// Ordered set of permitted characters; position doubles as the label index.
class Charset {
 public:
  /// 26 lowercase + 26 uppercase Latin letters.
  static Charset letters();
  /// letters() followed by the ten digits.
  static Charset letters_digits();

  /// Throws Error(InvalidArgument) on empty input or duplicate characters.
  explicit Charset(std::string chars);

  const std::string& chars() const { return chars_; }
  std::size_t size() const { return chars_.size(); }

  bool contains(char c) const { return chars_.find(c) != std::string::npos; }
  bool accepts(std::string_view word) const;
  std::optional<std::size_t> index_of(char c) const;

 private:
  std::string chars_;
};

}  // namespace steforge
