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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "acrc/error.hpp"
#include "acrc/java/parser.hpp"
#include "acrc/java/printer.hpp"
#include "acrc/java/resolve.hpp"
#include "acrc/spp/naming.hpp"
#include "acrc/spp/operators.hpp"
#include "acrc/spp/types.hpp"

namespace acrc::spp {

struct Outcome {
  std::optional<PerturbedVariant> variant;
  Applicability status;
};

/// Maximal runs of perturbed tokens.
inline std::vector<Span> perturbed_spans(const java::Rendered& r) {
  std::vector<Span> out;
  for (std::size_t i = 0; i < r.perturbed.size();) {
    if (!r.perturbed[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < r.perturbed.size() && r.perturbed[j]) ++j;
    out.push_back({i, j});
    i = j;
  }
  return out;
}

namespace detail {

inline Outcome excluded(Reason r, std::string detail = {}) {
  Outcome o;
  o.status = {false, r, std::move(detail)};
  return o;
}

}  // namespace detail

/// Applies `p` to the instance, pairing the revision, or reports why the
/// instance is excluded for `p`.
inline Outcome perturb(const ReviewInstance& inst, PType p,
                       std::uint64_t global_seed = kDefaultSeed) {
  using detail::excluded;
  java::ParsedMethod code;
  java::ParsedMethod rev;
  try {
    code = java::parse_method(inst.code, {java::TagPolicy::kRequired});
  } catch (const Error& e) {
    return excluded(Reason::kParseError, e.what());
  }
  try {
    rev = java::parse_method(inst.revision, {java::TagPolicy::kForbidden});
  } catch (const Error& e) {
    return excluded(Reason::kRevisionParseError, e.what());
  }

  const java::Rendered code_before = java::render(code.ast);
  const java::Rendered rev_before = java::render(rev.ast);

  std::set<std::string> taken;
  collect_identifiers(inst.code, taken);
  collect_identifiers(inst.revision, taken);
  for_each_word(inst.comment, [&](std::size_t b, std::size_t e) {
    taken.insert(inst.comment.substr(b, e - b));
  });
  const std::uint64_t seed = instance_seed(global_seed, inst.id, p);
  NameGenerator gen(seed, std::move(taken));
  Plan plan;

  Side c{code.ast, java::resolve(code.ast), false};
  if (const Reason r = check(p, c); r != Reason::kOk) return excluded(r);
  try {
    transform(p, c, plan, gen);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kNameCollision) return excluded(Reason::kNameCollision, e.what());
    throw;
  }
  const java::Rendered code_after = java::render(code.ast);
  if (strip_tags(code_after.tokens) == rev_before.tokens) {
    return excluded(Reason::kFixEqualsPerturbation);
  }

  Side r{rev.ast, java::resolve(rev.ast), true};
  if (const Reason why = check(p, r); why != Reason::kOk) {
    return excluded(Reason::kPairingFailure, std::string(reason_code(why)));
  }
  try {
    transform(p, r, plan, gen);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kPairingFailure) return excluded(Reason::kPairingFailure, e.what());
    if (e.code() == ErrorCode::kNameCollision) return excluded(Reason::kNameCollision, e.what());
    throw;
  }

  PerturbedVariant v;
  v.instance_id = inst.id;
  v.ptype = p;
  v.seed = seed;
  v.code = code_after.text;
  v.revision = java::serialize(rev.ast, false);
  v.comment = plan.rename.empty() ? inst.comment : rewrite_words(inst.comment, plan.rename);
  v.spans = perturbed_spans(code_after);
  if (code_after.tokens == code_before.tokens || v.spans.empty()) {
    return excluded(Reason::kNoTokenChange);
  }
  Outcome o;
  o.variant = std::move(v);
  o.status = {true, Reason::kOk, {}};
  return o;
}

inline Applicability applicable(PType p, const ReviewInstance& inst,
                                std::uint64_t global_seed = kDefaultSeed) {
  return perturb(inst, p, global_seed).status;
}

/// Like perturb(), but inapplicability is an error.
inline PerturbedVariant apply(PType p, const ReviewInstance& inst,
                              std::uint64_t global_seed = kDefaultSeed) {
  Outcome o = perturb(inst, p, global_seed);
  if (o.variant) return std::move(*o.variant);
  const std::string msg = ptype_id(p) + " on " + inst.id + ": " +
                          std::string(reason_code(o.status.reason)) +
                          (o.status.detail.empty() ? "" : " (" + o.status.detail + ")");
  switch (o.status.reason) {
    case Reason::kPairingFailure:
      throw Error(ErrorCode::kPairingFailure, msg);
    case Reason::kNameCollision:
      throw Error(ErrorCode::kNameCollision, msg);
    case Reason::kParseError:
    case Reason::kRevisionParseError:
      throw Error(ErrorCode::kParseError, msg);
    default:
      throw Error(ErrorCode::kInvalidInput, msg);
  }
}

}  // namespace acrc::spp
