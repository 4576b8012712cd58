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
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace acrc {

/// One review triplet: tagged code, reviewer comment, revised code.
struct ReviewInstance {
  std::string id;
  std::string code;
  std::string comment;
  std::string revision;
};

namespace spp {

enum class PType : std::uint8_t {
  kIfElseSwap = 1,
  kDeadException,
  kDeadAssignment,
  kTryCatchWrap,
  kIndependentSwap,
  kReturnViaVariable,
  kDefUseBreak,
  kRandomNames,
  kShuffleNames,
};

inline constexpr std::array<PType, 9> kAllPTypes = {
    PType::kIfElseSwap,      PType::kDeadException,     PType::kDeadAssignment,
    PType::kTryCatchWrap,    PType::kIndependentSwap,   PType::kReturnViaVariable,
    PType::kDefUseBreak,     PType::kRandomNames,       PType::kShuffleNames,
};

enum class Concept { kControlFlow, kDataFlow, kNaming };

inline std::string ptype_id(PType p) { return "p" + std::to_string(static_cast<int>(p)); }

inline std::optional<PType> parse_ptype(std::string_view s) {
  if (s.size() != 2 || (s[0] != 'p' && s[0] != 'P') || s[1] < '1' || s[1] > '9') {
    return std::nullopt;
  }
  return static_cast<PType>(s[1] - '0');
}

inline Concept ptype_concept(PType p) {
  const int n = static_cast<int>(p);
  if (n <= 5) return Concept::kControlFlow;
  if (n <= 7) return Concept::kDataFlow;
  return Concept::kNaming;
}

inline std::string_view ptype_name(PType p) {
  switch (p) {
    case PType::kIfElseSwap: return "if-else swap";
    case PType::kDeadException: return "dead exception insertion";
    case PType::kDeadAssignment: return "dead variable assignment insertion";
    case PType::kTryCatchWrap: return "try-catch wrapper";
    case PType::kIndependentSwap: return "independent line swap";
    case PType::kReturnViaVariable: return "return via variable";
    case PType::kDefUseBreak: return "def-use break";
    case PType::kRandomNames: return "random variable names";
    case PType::kShuffleNames: return "shuffle variable names";
  }
  return "?";
}

enum class Reason : std::uint8_t {
  kOk,
  kParseError,
  kRevisionParseError,
  kNoIfElse,
  kEmptyBody,
  kAlreadyWrapped,
  kConstructorCall,
  kNoIndependentPair,
  kConstructor,
  kVoidReturn,
  kRunnableReturn,
  kNoReturnValue,
  kNoLocalDefinition,
  kNoVariables,
  kNeedsTwoVariables,
  kNameCapture,
  kPairingFailure,
  kFixEqualsPerturbation,
  kNoTokenChange,
  kNameCollision,
};

inline std::string_view reason_code(Reason r) {
  switch (r) {
    case Reason::kOk: return "ok";
    case Reason::kParseError: return "parse-error";
    case Reason::kRevisionParseError: return "revision-parse-error";
    case Reason::kNoIfElse: return "no-if-else";
    case Reason::kEmptyBody: return "empty-body";
    case Reason::kAlreadyWrapped: return "already-wrapped";
    case Reason::kConstructorCall: return "explicit-constructor-call";
    case Reason::kNoIndependentPair: return "no-independent-pair";
    case Reason::kConstructor: return "constructor";
    case Reason::kVoidReturn: return "void-return";
    case Reason::kRunnableReturn: return "runnable-return";
    case Reason::kNoReturnValue: return "no-return-value";
    case Reason::kNoLocalDefinition: return "no-local-definition";
    case Reason::kNoVariables: return "no-variables";
    case Reason::kNeedsTwoVariables: return "needs-two-variables";
    case Reason::kNameCapture: return "name-capture";
    case Reason::kPairingFailure: return "pairing-failure";
    case Reason::kFixEqualsPerturbation: return "fix-equals-perturbation";
    case Reason::kNoTokenChange: return "no-token-change";
    case Reason::kNameCollision: return "name-collision";
  }
  return "?";
}

/// Half-open token interval.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  bool operator==(const Span&) const = default;
};

struct PerturbedVariant {
  std::string instance_id;
  PType ptype = PType::kIfElseSwap;
  std::string code;      // tagged
  std::string revision;  // untagged
  std::string comment;
  std::vector<Span> spans;  // over tokenize(code)
  std::uint64_t seed = 0;
};

struct Applicability {
  bool ok = false;
  Reason reason = Reason::kOk;
  std::string detail;
};

}  // namespace spp
}  // namespace acrc
