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

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "acrc/diffkit.hpp"
#include "acrc/error.hpp"
#include "acrc/lexer.hpp"
#include "acrc/spp/types.hpp"

namespace acrc::features {

using spp::Span;

enum class Position : std::uint8_t {
  kBefore,
  kAfter,
  kInside,
  kSurrounding,
  kOverlapBefore,
  kOverlapAfter,
  kOverlapBoth,
};

inline constexpr std::array<Position, 7> kAllPositions = {
    Position::kBefore,        Position::kAfter,        Position::kInside,
    Position::kSurrounding,   Position::kOverlapBefore, Position::kOverlapAfter,
    Position::kOverlapBoth};

inline std::string_view position_name(Position p) {
  switch (p) {
    case Position::kBefore: return "before";
    case Position::kAfter: return "after";
    case Position::kInside: return "inside";
    case Position::kSurrounding: return "surrounding";
    case Position::kOverlapBefore: return "overlap-before";
    case Position::kOverlapAfter: return "overlap-after";
    case Position::kOverlapBoth: return "overlap-both";
  }
  return "?";
}

inline std::optional<Position> parse_position(std::string_view s) {
  for (Position p : kAllPositions) {
    if (position_name(p) == s) return p;
  }
  return std::nullopt;
}

/// Relation of one span to the tagged interval.
enum class Relation { kBefore, kAfter, kInside, kOverlap };

inline Relation relate(Span s, Span tag) {
  if (s.end <= tag.start) return Relation::kBefore;
  if (s.start >= tag.end) return Relation::kAfter;
  if (s.start >= tag.start && s.end <= tag.end) return Relation::kInside;
  return Relation::kOverlap;
}

/// Tagged interval over a tagged stream: from `<START>` through `<END>`.
inline Span tagged_interval(const TokenStream& tokens) {
  std::optional<std::size_t> s;
  std::optional<std::size_t> e;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].kind != TokenKind::kTag) continue;
    if (tokens[i].text == kStartTag && !s) s = i;
    if (tokens[i].text == kEndTag) e = i;
  }
  if (!s || !e || *e < *s) throw Error(ErrorCode::kMalformedTags, "no tagged span");
  return {*s, *e + 1};
}

inline Position position_category(const std::vector<Span>& spans, Span tag) {
  if (spans.empty()) throw Error(ErrorCode::kInvalidInput, "no perturbed spans");
  bool touching = false;
  bool all_inside = true;
  bool rest_before = false;
  bool rest_after = false;
  bool residue_before = false;
  bool residue_after = false;
  for (const Span& s : spans) {
    const Relation r = relate(s, tag);
    all_inside = all_inside && r == Relation::kInside;
    switch (r) {
      case Relation::kBefore: rest_before = true; break;
      case Relation::kAfter: rest_after = true; break;
      case Relation::kInside: touching = true; break;
      case Relation::kOverlap:
        touching = true;
        residue_before = residue_before || s.start < tag.start;
        residue_after = residue_after || s.end > tag.end;
        break;
    }
  }
  if (all_inside) return Position::kInside;
  if (!touching) {
    if (rest_before && rest_after) return Position::kSurrounding;
    return rest_before ? Position::kBefore : Position::kAfter;
  }
  // Without non-touching siblings, the overlapping spans' own residue decides.
  const bool before = rest_before || rest_after ? rest_before : residue_before;
  const bool after = rest_before || rest_after ? rest_after : residue_after;
  if (before && after) return Position::kOverlapBoth;
  if (before) return Position::kOverlapBefore;
  if (after) return Position::kOverlapAfter;
  return Position::kInside;
}

/// Mean over spans of the token distance to the tagged interval; a span
/// ending right before `<START>` is at distance 1.
inline double perturbation_distance(const std::vector<Span>& spans, Span tag) {
  if (spans.empty()) throw Error(ErrorCode::kInvalidInput, "no perturbed spans");
  double sum = 0.0;
  for (const Span& s : spans) {
    switch (relate(s, tag)) {
      case Relation::kBefore: sum += static_cast<double>(tag.start - (s.end - 1)); break;
      case Relation::kAfter: sum += static_cast<double>(s.start - (tag.end - 1)); break;
      default: break;
    }
  }
  return sum / static_cast<double>(spans.size());
}

struct FeatureVector {
  Position pos = Position::kBefore;
  double distance = 0.0;
  std::size_t tok_edit_in = 0;
  std::size_t tok_edit_task = 0;
  std::size_t input_length = 0;
};

inline FeatureVector extract(const spp::PerturbedVariant& v, const ReviewInstance& inst) {
  const TokenStream code = tokenize(v.code);
  for (const Span& s : v.spans) {
    if (s.start >= s.end || s.end > code.size()) {
      throw Error(ErrorCode::kInvalidInput, "span outside the perturbed code");
    }
  }
  const Span tag = tagged_interval(code);
  FeatureVector f;
  f.pos = position_category(v.spans, tag);
  f.distance = perturbation_distance(v.spans, tag);
  const TokenStream untagged = strip_tags(code);
  f.tok_edit_in = diff::token_edit_distance(strip_tags(tokenize(inst.code)), untagged);
  f.tok_edit_task = diff::token_edit_distance(untagged, tokenize(v.revision));
  f.input_length = code.size();
  return f;
}

}  // namespace acrc::features
