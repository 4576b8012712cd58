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
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "acrc/diffkit.hpp"
#include "acrc/error.hpp"
#include "acrc/lexer.hpp"
#include "acrc/metrics/codebleu.hpp"

namespace acrc::metrics {

struct MetricsRecord {
  bool exm = false;
  bool em = false;
  std::optional<double> ree;  // present iff em
  double codebleu = 0.0;
  bool codebleu_degraded = false;
};

/// Token-for-token equality.
inline bool exact_match(std::string_view candidate, std::string_view reference) {
  return tokenize(candidate) == tokenize(reference);
}

namespace detail {

inline diff::Texts untagged(std::string_view code) {
  return token_texts(strip_tags(tokenize(code)));
}

inline bool contains_run(const diff::Texts& hay, const diff::Texts& needle) {
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

// Kuhn's augmenting paths: can every required region take a distinct model
// region of the same kind that contains it?
inline bool all_regions_matched(const diff::EditScript& required,
                                const diff::EditScript& made) {
  const auto& g = required.regions;
  const auto& m = made.regions;
  std::vector<std::vector<std::size_t>> fits(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (g[i].kind == m[j].kind && contains_run(m[j].tokens, g[i].tokens)) fits[i].push_back(j);
    }
  }
  std::vector<int> owner(m.size(), -1);
  std::function<bool(std::size_t, std::vector<bool>&)> augment =
      [&](std::size_t i, std::vector<bool>& seen) {
        for (std::size_t j : fits[i]) {
          if (seen[j]) continue;
          seen[j] = true;
          if (owner[j] < 0 || augment(static_cast<std::size_t>(owner[j]), seen)) {
            owner[j] = static_cast<int>(i);
            return true;
          }
        }
        return false;
      };
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::vector<bool> seen(m.size(), false);
    if (!augment(i, seen)) return false;
  }
  return true;
}

}  // namespace detail

/// Every ground-truth edit region (input -> reference) is covered by a
/// distinct model edit region (input -> candidate). Tags in the input are
/// ignored.
inline bool edit_match(std::string_view input, std::string_view candidate,
                       std::string_view reference) {
  const diff::Texts in = detail::untagged(input);
  return detail::all_regions_matched(diff::edit_script(in, detail::untagged(reference)),
                                     diff::edit_script(in, detail::untagged(candidate)));
}

inline double relative_edit_error(std::string_view input, std::string_view candidate,
                                  std::string_view reference) {
  const diff::Texts in = detail::untagged(input);
  const std::size_t gt = diff::edit_script(in, detail::untagged(reference)).size();
  if (gt == 0) {
    throw Error(ErrorCode::kZeroReferenceEdits, "reference revision equals the input");
  }
  const std::size_t model = diff::edit_script(in, detail::untagged(candidate)).size();
  return (static_cast<double>(model) - static_cast<double>(gt)) / static_cast<double>(gt);
}

inline MetricsRecord evaluate(std::string_view input, std::string_view candidate,
                              std::string_view reference,
                              const CodeBleuWeights& weights = {}) {
  MetricsRecord r;
  r.exm = exact_match(candidate, reference);
  r.em = r.exm || edit_match(input, candidate, reference);
  if (r.em) r.ree = r.exm ? 0.0 : relative_edit_error(input, candidate, reference);
  const CodeBleu cb = codebleu(candidate, reference, weights);
  r.codebleu = cb.score;
  r.codebleu_degraded = cb.degraded;
  return r;
}

}  // namespace acrc::metrics
