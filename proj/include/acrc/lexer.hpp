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

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace acrc {

enum class TokenKind : std::uint8_t {
  kIdentifier,
  kKeyword,
  kOperator,
  kSeparator,
  kLiteral,
  kTag,
  kComment,
};

struct Token {
  TokenKind kind = TokenKind::kOperator;
  std::string text;
  std::size_t offset = 0;  // byte offset in the lexed source

  bool operator==(const Token& o) const {
    return kind == o.kind && text == o.text;
  }
};

using TokenStream = std::vector<Token>;

inline constexpr std::string_view kStartTag = "<START>";
inline constexpr std::string_view kEndTag = "<END>";

// Line comments of the form `// REVIEW: ...` are review comments injected by
// the inline-comment mitigation. They survive lexing as one comment token.
inline constexpr std::string_view kInlineReviewMarker = "REVIEW:";

struct LexOptions {
  bool keep_comments = false;  // keep every comment, not only injected ones
};

namespace detail {

// Java SE reserved words (literals true/false/null excluded; they lex as
// literals). Sorted for binary search.
inline constexpr std::array<std::string_view, 51> kJavaKeywords = {
    "_",          "abstract",  "assert",     "boolean",   "break",
    "byte",       "case",      "catch",      "char",      "class",
    "const",      "continue",  "default",    "do",        "double",
    "else",       "enum",      "extends",    "final",     "finally",
    "float",      "for",       "goto",       "if",        "implements",
    "import",     "instanceof", "int",       "interface", "long",
    "native",     "new",       "package",    "private",   "protected",
    "public",     "return",    "short",      "static",    "strictfp",
    "super",      "switch",    "synchronized", "this",    "throw",
    "throws",     "transient", "try",        "void",      "volatile",
    "while",
};

inline bool is_ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
         c == '$' || c >= 0x80;
}

inline bool is_ident_part(unsigned char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9');
}

inline bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

inline bool is_hex_digit(unsigned char c) {
  return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

// Longest first.
inline constexpr std::array<std::string_view, 25> kCompoundOperators = {
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--",
    "&&",   "||",  "==",  "!=",  "<=",  ">=", "+=", "-=", "*=",
    "/=",   "%=",  "&=",  "|=",  "^=",  "<<", ">>",
};

inline TokenKind punct_kind(std::string_view text) {
  static constexpr std::array<std::string_view, 12> kSeparators = {
      "(", ")", "{", "}", "[", "]", ";", ",", ".", "...", "@", "::"};
  return std::find(kSeparators.begin(), kSeparators.end(), text) !=
                 kSeparators.end()
             ? TokenKind::kSeparator
             : TokenKind::kOperator;
}

inline std::size_t scan_number(std::string_view s, std::size_t i) {
  const std::size_t n = s.size();
  auto digits = [&](auto pred) {
    while (i < n && (pred(static_cast<unsigned char>(s[i])) || s[i] == '_')) {
      ++i;
    }
  };
  if (s[i] == '0' && i + 1 < n && (s[i + 1] == 'x' || s[i + 1] == 'X')) {
    i += 2;
    digits(is_hex_digit);
  } else if (s[i] == '0' && i + 1 < n && (s[i + 1] == 'b' || s[i + 1] == 'B')) {
    i += 2;
    digits(is_digit);
  } else {
    digits(is_digit);
    if (i < n && s[i] == '.' &&
        !(i + 1 < n && is_ident_start(static_cast<unsigned char>(s[i + 1]))) &&
        !(i + 1 < n && s[i + 1] == '.')) {
      ++i;
      digits(is_digit);
    }
    if (i < n && (s[i] == 'e' || s[i] == 'E')) {
      std::size_t j = i + 1;
      if (j < n && (s[j] == '+' || s[j] == '-')) ++j;
      if (j < n && is_digit(static_cast<unsigned char>(s[j]))) {
        i = j;
        digits(is_digit);
      }
    }
  }
  if (i < n && std::string_view("lLfFdD").find(s[i]) != std::string_view::npos) {
    ++i;
  }
  return i;
}

// Scans a quoted literal starting at the opening quote. Unterminated literals
// end at the line break.
inline std::size_t scan_quoted(std::string_view s, std::size_t i, char quote) {
  const std::size_t n = s.size();
  if (quote == '"' && s.substr(i, 3) == "\"\"\"") {
    const std::size_t close = s.find("\"\"\"", i + 3);
    return close == std::string_view::npos ? n : close + 3;
  }
  ++i;
  while (i < n && s[i] != quote && s[i] != '\n') {
    if (s[i] == '\\' && i + 1 < n) ++i;
    ++i;
  }
  return i < n && s[i] == quote ? i + 1 : i;
}

inline bool is_review_comment(std::string_view comment) {
  if (comment.substr(0, 2) != "//") return false;
  std::size_t i = 2;
  while (i < comment.size() && comment[i] == ' ') ++i;
  return comment.substr(i, kInlineReviewMarker.size()) == kInlineReviewMarker;
}

}  // namespace detail

inline bool is_java_keyword(std::string_view word) {
  return std::binary_search(detail::kJavaKeywords.begin(),
                            detail::kJavaKeywords.end(), word);
}

/// Lexes Java source into tokens. Total: every input produces a stream.
/// Whitespace and comments are dropped, except injected review comments (and
/// all comments when `opts.keep_comments` is set).
inline TokenStream tokenize(std::string_view src, LexOptions opts = {}) {
  using namespace detail;
  TokenStream out;
  const std::size_t n = src.size();
  std::size_t i = 0;
  auto push = [&](TokenKind kind, std::size_t begin, std::size_t end) {
    out.push_back(Token{kind, std::string(src.substr(begin, end - begin)), begin});
  };
  while (i < n) {
    const auto c = static_cast<unsigned char>(src[i]);
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
        c == '\v') {
      ++i;
      continue;
    }
    const std::size_t begin = i;
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      std::size_t end = src.find('\n', i);
      if (end == std::string_view::npos) end = n;
      std::size_t text_end = end;
      while (text_end > begin &&
             (src[text_end - 1] == '\r' || src[text_end - 1] == ' ' ||
              src[text_end - 1] == '\t')) {
        --text_end;
      }
      if (opts.keep_comments ||
          is_review_comment(src.substr(begin, text_end - begin))) {
        push(TokenKind::kComment, begin, text_end);
      }
      i = end;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      std::size_t end = src.find("*/", i + 2);
      end = end == std::string_view::npos ? n : end + 2;
      if (opts.keep_comments) push(TokenKind::kComment, begin, end);
      i = end;
      continue;
    }
    if (c == '<' && src.substr(i, kStartTag.size()) == kStartTag) {
      push(TokenKind::kTag, i, i + kStartTag.size());
      i += kStartTag.size();
      continue;
    }
    if (c == '<' && src.substr(i, kEndTag.size()) == kEndTag) {
      push(TokenKind::kTag, i, i + kEndTag.size());
      i += kEndTag.size();
      continue;
    }
    if (is_ident_start(c)) {
      while (i < n && is_ident_part(static_cast<unsigned char>(src[i]))) ++i;
      const std::string_view word = src.substr(begin, i - begin);
      TokenKind kind = TokenKind::kIdentifier;
      if (word == "true" || word == "false" || word == "null") {
        kind = TokenKind::kLiteral;
      } else if (is_java_keyword(word)) {
        kind = TokenKind::kKeyword;
      }
      push(kind, begin, i);
      continue;
    }
    if (is_digit(c) ||
        (c == '.' && i + 1 < n && is_digit(static_cast<unsigned char>(src[i + 1])))) {
      i = scan_number(src, i);
      push(TokenKind::kLiteral, begin, i);
      continue;
    }
    if (c == '"' || c == '\'') {
      i = scan_quoted(src, i, static_cast<char>(c));
      push(TokenKind::kLiteral, begin, i);
      continue;
    }
    bool matched = false;
    for (std::string_view op : kCompoundOperators) {
      if (src.substr(i, op.size()) == op) {
        push(punct_kind(op), i, i + op.size());
        i += op.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    ++i;
    push(punct_kind(src.substr(begin, 1)), begin, i);
  }
  return out;
}

/// Token texts only; the representation metrics compare.
inline std::vector<std::string> token_texts(const TokenStream& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) out.push_back(t.text);
  return out;
}

inline TokenStream strip_tags(TokenStream tokens) {
  std::erase_if(tokens, [](const Token& t) { return t.kind == TokenKind::kTag; });
  return tokens;
}

/// Joins token texts with single spaces.
inline std::string join_tokens(const TokenStream& tokens) {
  std::string out;
  for (const Token& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t.text;
  }
  return out;
}

}  // namespace acrc
