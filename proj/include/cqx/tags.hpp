// Copyright 2026 The cqx Authors.
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

#ifndef CQX_TAGS_HPP_
#define CQX_TAGS_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace cqx {

// Output labels of the sequence labeler, in model order.
enum class Tag : std::size_t { Count = 0, Comp = 1, O = 2 };

inline constexpr std::size_t kNumTags = 3;
inline constexpr std::array<Tag, kNumTags> kAllTags = {Tag::Count, Tag::Comp,
                                                       Tag::O};

inline constexpr std::size_t tag_index(Tag t) {
  return static_cast<std::size_t>(t);
}

inline std::string_view to_string(Tag t) {
  switch (t) {
    case Tag::Count: return "COUNT";
    case Tag::Comp: return "COMP";
    case Tag::O: return "O";
  }
  return "O";
}

inline std::optional<Tag> tag_from_string(std::string_view s) {
  if (s == "COUNT") return Tag::Count;
  if (s == "COMP") return Tag::Comp;
  if (s == "O") return Tag::O;
  return std::nullopt;
}

}  // namespace cqx

#endif  // CQX_TAGS_HPP_
