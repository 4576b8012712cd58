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

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "acrc/java/dataflow.hpp"
#include "acrc/java/parser.hpp"
#include "acrc/lexer.hpp"

namespace acrc::metrics {

struct CodeBleuWeights {
  double ngram = 0.25;
  double weighted_ngram = 0.25;
  double syntax = 0.25;
  double dataflow = 0.25;
};

struct CodeBleu {
  double score = 0.0;
  double ngram = 0.0;
  double weighted_ngram = 0.0;
  double syntax = 0.0;
  double dataflow = 0.0;
  bool degraded = false;  // a side failed to parse; syntax and dataflow are 0
};

inline constexpr int kMaxOrder = 4;
inline constexpr double kKeywordWeight = 4.0;

namespace detail {

using Texts = std::vector<std::string>;
using Counts = std::map<std::vector<std::string>, double>;

inline Counts ngrams(const Texts& t, std::size_t n) {
  Counts c;
  for (std::size_t i = 0; i + n <= t.size(); ++i) {
    c[Texts(t.begin() + static_cast<long>(i), t.begin() + static_cast<long>(i + n))] += 1;
  }
  return c;
}

inline double brevity_penalty(std::size_t cand, std::size_t ref) {
  if (cand == 0) return 0.0;
  if (cand >= ref) return 1.0;
  return std::exp(1.0 - static_cast<double>(ref) / static_cast<double>(cand));
}

// Sentence BLEU, uniform weights over orders 1..4, add-one smoothing for
// orders >= 2. With `keyword_weight`, unigram matches of Java keywords count
// that many times.
inline double bleu(const Texts& cand, const Texts& ref, double keyword_weight = 1.0) {
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= kMaxOrder; ++n) {
    const Counts c = ngrams(cand, n);
    const Counts r = ngrams(ref, n);
    double match = 0.0;
    double total = 0.0;
    for (const auto& [gram, count] : c) {
      const double w = n == 1 && is_java_keyword(gram.front()) ? keyword_weight : 1.0;
      auto it = r.find(gram);
      if (it != r.end()) match += w * std::min(count, it->second);
      total += w * count;
    }
    const double smooth = n >= 2 ? 1.0 : 0.0;
    if (match + smooth <= 0.0 || total + smooth <= 0.0) return 0.0;
    log_sum += std::log((match + smooth) / (total + smooth));
  }
  return brevity_penalty(cand.size(), ref.size()) * std::exp(log_sum / kMaxOrder);
}

inline std::string sexp(const java::Node& n, std::vector<std::string>& out) {
  if (n.is_leaf()) {
    if (n.token_kind == TokenKind::kIdentifier) return "id";
    if (n.token_kind == TokenKind::kLiteral) return "lit";
    return {};
  }
  if (n.is_marker()) return {};
  std::string s = "(" + std::string(java::kind_name(n.kind));
  for (const java::Node& k : n.kids) {
    const std::string sub = sexp(k, out);
    if (!sub.empty()) s += " " + sub;
  }
  s += ")";
  out.push_back(s);
  return s;
}

inline std::vector<std::string> subtrees(const java::MethodAst& ast) {
  std::vector<std::string> out;
  sexp(ast.root, out);
  return out;
}

// Share of reference items found in the candidate, clipped multiset counting.
inline double match_ratio(const std::vector<std::string>& cand,
                          const std::vector<std::string>& ref) {
  if (ref.empty()) return cand.empty() ? 1.0 : 0.0;
  std::map<std::string, int> pool;
  for (const auto& c : cand) ++pool[c];
  std::size_t hit = 0;
  for (const auto& r : ref) {
    auto it = pool.find(r);
    if (it != pool.end() && it->second > 0) {
      --it->second;
      ++hit;
    }
  }
  return static_cast<double>(hit) / static_cast<double>(ref.size());
}

inline std::optional<java::MethodAst> try_parse(std::string_view code) {
  try {
    return java::parse_method(code, {java::TagPolicy::kOptional}).ast;
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace detail

inline CodeBleu codebleu(std::string_view candidate, std::string_view reference,
                         const CodeBleuWeights& w = {}) {
  const detail::Texts cand = token_texts(strip_tags(tokenize(candidate)));
  const detail::Texts ref = token_texts(strip_tags(tokenize(reference)));
  CodeBleu r;
  if (cand == ref) {
    r.ngram = r.weighted_ngram = r.syntax = r.dataflow = 1.0;
    r.score = 1.0;
    return r;
  }
  r.ngram = detail::bleu(cand, ref);
  r.weighted_ngram = detail::bleu(cand, ref, kKeywordWeight);
  auto cand_ast = detail::try_parse(candidate);
  auto ref_ast = detail::try_parse(reference);
  if (cand_ast && ref_ast) {
    r.syntax = detail::match_ratio(detail::subtrees(*cand_ast), detail::subtrees(*ref_ast));
    r.dataflow = detail::match_ratio(java::dataflow_edges(*cand_ast),
                                     java::dataflow_edges(*ref_ast));
  } else {
    r.degraded = true;
  }
  const double total = w.ngram + w.weighted_ngram + w.syntax + w.dataflow;
  if (total <= 0.0) throw Error(ErrorCode::kInvalidInput, "CodeBLEU weights sum to zero");
  r.score = (w.ngram * r.ngram + w.weighted_ngram * r.weighted_ngram + w.syntax * r.syntax +
             w.dataflow * r.dataflow) /
            total;
  return r;
}

}  // namespace acrc::metrics
