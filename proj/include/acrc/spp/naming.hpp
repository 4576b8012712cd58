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

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <string_view>

#include "acrc/error.hpp"
#include "acrc/lexer.hpp"
#include "acrc/spp/types.hpp"

namespace acrc::spp {

inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr int kMaxNameAttempts = 100;

inline std::uint64_t fnv1a64(std::string_view s,
                             std::uint64_t h = 14695981039346656037ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t instance_seed(std::uint64_t global, std::string_view instance_id,
                                   PType p) {
  std::uint64_t h = fnv1a64(instance_id);
  h = fnv1a64(std::string_view("\x1f", 1), h);
  h = fnv1a64(ptype_id(p), h);
  return global ^ h;
}

/// Identifier-like words of free text (for comment rewriting and collisions).
template <typename Fn>
void for_each_word(std::string_view text, Fn&& fn) {
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (detail::is_ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && detail::is_ident_part(static_cast<unsigned char>(text[j]))) ++j;
      fn(i, j);
      i = j;
    } else if (detail::is_digit(c)) {
      while (i < text.size() && detail::is_ident_part(static_cast<unsigned char>(text[i]))) ++i;
    } else {
      ++i;
    }
  }
}

/// Whole-word, simultaneous replacement.
inline std::string rewrite_words(std::string_view text,
                                 const std::map<std::string, std::string>& rename) {
  std::string out;
  std::size_t last = 0;
  for_each_word(text, [&](std::size_t b, std::size_t e) {
    auto it = rename.find(std::string(text.substr(b, e - b)));
    if (it == rename.end()) return;
    out.append(text.substr(last, b - last));
    out += it->second;
    last = e;
  });
  out.append(text.substr(last));
  return out;
}

inline void collect_identifiers(std::string_view code, std::set<std::string>& into) {
  for (const Token& t : tokenize(code)) {
    if (t.kind == TokenKind::kIdentifier) into.insert(t.text);
  }
}

/// Seeded source of fresh 5-letter lowercase names.
class NameGenerator {
 public:
  NameGenerator(std::uint64_t seed, std::set<std::string> taken)
      : rng_(seed), taken_(std::move(taken)) {}

  bool taken(const std::string& name) const {
    return taken_.count(name) > 0 || is_java_keyword(name);
  }

  void reserve(const std::string& name) { taken_.insert(name); }

  /// Uniform-enough draw in [0, n); plain modulo keeps it portable.
  std::uint64_t below(std::uint64_t n) { return rng_() % n; }

  std::string fresh() {
    for (int attempt = 0; attempt < kMaxNameAttempts; ++attempt) {
      std::string name(5, 'a');
      for (char& c : name) c = static_cast<char>('a' + below(26));
      if (!taken(name)) {
        reserve(name);
        return name;
      }
    }
    throw Error(ErrorCode::kNameCollision,
                "no fresh name after " + std::to_string(kMaxNameAttempts) + " draws");
  }

  /// `preferred` unless the method already uses it, otherwise a fresh name.
  std::string prefer(const std::string& preferred, const std::set<std::string>& in_method) {
    if (!in_method.count(preferred) && !is_java_keyword(preferred)) {
      reserve(preferred);
      return preferred;
    }
    return fresh();
  }

 private:
  std::mt19937_64 rng_;
  std::set<std::string> taken_;
};

}  // namespace acrc::spp
