// Copyright 2026 The acrc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
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
#include <vector>

#include "acrc/error.hpp"
#include "acrc/java/parser.hpp"
#include "acrc/java/printer.hpp"
#include "acrc/lexer.hpp"

namespace acrc::harness {

namespace detail {

// Drops ``` fence lines and any <START>/<END> markers.
inline std::string unfence(std::string_view text) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t nl = text.find('\n', i);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(i, nl - i);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line.substr(first, 3) != "```") {
      out += line;
      out += '\n';
    }
    i = nl + 1;
  }
  for (std::string_view tag : {kStartTag, kEndTag}) {
    for (auto at = out.find(tag); at != std::string::npos; at = out.find(tag, at)) {
      out.erase(at, tag.size());
    }
  }
  return out;
}

// Index one past the brace closing the first '{' at or after `from`, skipping
// literals and comments.
inline std::optional<std::size_t> balanced_end(std::string_view s, std::size_t from) {
  int depth = 0;
  bool opened = false;
  for (std::size_t i = from; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '/' && i + 1 < s.size() && s[i + 1] == '/') {
      i = s.find('\n', i);
      if (i == std::string_view::npos) return std::nullopt;
    } else if (c == '/' && i + 1 < s.size() && s[i + 1] == '*') {
      i = s.find("*/", i + 2);
      if (i == std::string_view::npos) return std::nullopt;
      ++i;
    } else if (c == '"' || c == '\'') {
      for (++i; i < s.size() && s[i] != c; ++i) {
        if (s[i] == '\\') ++i;
        if (s[i] == '\n') break;
      }
    } else if (c == '{') {
      ++depth;
      opened = true;
    } else if (c == '}') {
      if (--depth == 0 && opened) return i + 1;
      if (depth < 0) return std::nullopt;
    } else if (c == ';' && !opened) {
      return std::nullopt;  // abstract/interface declaration or prose
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// First method declaration in a model response, canonically printed.
inline std::optional<std::string> extract_method(std::string_view response) {
  const std::string text = detail::unfence(response);
  std::vector<std::size_t> starts{0};
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\n') starts.push_back(i + 1);
  }
  for (std::size_t s : starts) {
    const auto end = detail::balanced_end(text, s);
    if (!end) continue;
    try {
      const auto parsed =
          java::parse_method(std::string_view(text).substr(s, *end - s), {java::TagPolicy::kForbidden});
      return java::serialize(parsed.ast, false);
    } catch (const Error&) {
      continue;
    }
  }
  return std::nullopt;
}

}  // namespace acrc::harness
