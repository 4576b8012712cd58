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

#include "acrc/error.hpp"
#include "acrc/lexer.hpp"

namespace acrc::harness {

enum class Mitigation { kNone, kCR, kIC, kCoT };

inline std::string_view mitigation_name(Mitigation m) {
  switch (m) {
    case Mitigation::kNone: return "none";
    case Mitigation::kCR: return "cr";
    case Mitigation::kIC: return "ic";
    case Mitigation::kCoT: return "cot";
  }
  return "?";
}

inline std::optional<Mitigation> parse_mitigation(std::string_view s) {
  for (Mitigation m : {Mitigation::kNone, Mitigation::kCR, Mitigation::kIC, Mitigation::kCoT}) {
    if (s == mitigation_name(m)) return m;
  }
  return std::nullopt;
}

inline constexpr std::string_view kPromptVersion = "acrc-prompt/1";

inline constexpr std::string_view kTaskTemplate =
    "Revise the following Java method so that it addresses the review comment. "
    "The comment refers to the code between <START> and <END>. "
    "Return only the complete revised method without the <START> and <END> markers.\n\n"
    "Code:\n{code}\n\nReview comment:\n{comment}\n";

inline constexpr std::string_view kCrPrefix = "For this part of the Java code: ";
inline constexpr std::string_view kCotSentence =
    "Provide step-by-step reasoning about how the review comment relates to the code";
inline constexpr std::string_view kInlineMarker = "// REVIEW: ";

namespace detail {

// Single pass so substituted text is never rescanned for placeholders.
inline std::string fill(std::string_view tmpl, std::string_view code, std::string_view comment) {
  std::string out;
  for (std::size_t i = 0; i < tmpl.size();) {
    if (tmpl.substr(i, 6) == "{code}") {
      out += code;
      i += 6;
    } else if (tmpl.substr(i, 9) == "{comment}") {
      out += comment;
      i += 9;
    } else {
      out += tmpl[i++];
    }
  }
  return out;
}

inline std::string single_line(std::string_view s) {
  std::string out;
  for (char c : s) out += (c == '\n' || c == '\r') ? ' ' : c;
  return out;
}

}  // namespace detail

/// Source text of the tagged span, tags excluded.
inline std::string tagged_span_text(std::string_view code) {
  const auto b = code.find(kStartTag);
  const auto e = code.find(kEndTag);
  if (b == std::string_view::npos || e == std::string_view::npos || e < b) {
    throw Error(ErrorCode::kMalformedTags, "no tagged span");
  }
  std::string_view inner = code.substr(b + kStartTag.size(), e - b - kStartTag.size());
  const auto first = inner.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = inner.find_last_not_of(" \t\r\n");
  return std::string(inner.substr(first, last - first + 1));
}

/// Places the comment on its own line right after <END>.
inline std::string inline_comment(std::string_view code, std::string_view comment) {
  const auto e = code.find(kEndTag);
  if (e == std::string_view::npos) throw Error(ErrorCode::kMalformedTags, "no <END> tag");
  const std::size_t at = e + kEndTag.size();
  std::string out(code.substr(0, at));
  out += '\n';
  out += kInlineMarker;
  out += detail::single_line(comment);
  out += '\n';
  out += code.substr(at);
  return out;
}

/// Prompt for (tagged code, comment) under a mitigation strategy.
inline std::string build_prompt(std::string_view code, std::string_view comment, Mitigation m,
                                bool instruction_tuned = true) {
  if (m == Mitigation::kCoT && !instruction_tuned) {
    throw Error(ErrorCode::kUnsupportedMitigation,
                "chain-of-thought needs an instruction-tuned model");
  }
  std::string shown_code(code);
  std::string shown_comment(comment);
  if (m == Mitigation::kCR) {
    shown_comment = std::string(kCrPrefix) + tagged_span_text(code) +
                    ", this review comment is provided: " + std::string(comment) + ".";
  } else if (m == Mitigation::kIC) {
    shown_code = inline_comment(code, comment);
  }
  std::string prompt = detail::fill(kTaskTemplate, shown_code, shown_comment);
  if (m == Mitigation::kCoT) {
    prompt += '\n';
    prompt += kCotSentence;
    prompt += '\n';
  }
  return prompt;
}

}  // namespace acrc::harness
