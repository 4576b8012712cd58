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

#include <stdexcept>
#include <string>
#include <string_view>

namespace acrc {

enum class ErrorCode {
  kMalformedTags,
  kParseError,
  kSpanUnmappable,
  kPairingFailure,
  kNameCollision,
  kZeroReferenceEdits,
  kEmptyInput,
  kInvalidInput,
  kRankDeficient,
  kDegenerateInput,
  kIoError,
  kSchemaError,
  kTransport,
  kEmptyResponse,
  kExtractionFailure,
  kUnsupportedMitigation,
  kUsage,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedTags: return "MalformedTags";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kSpanUnmappable: return "SpanUnmappable";
    case ErrorCode::kPairingFailure: return "PairingFailure";
    case ErrorCode::kNameCollision: return "NameCollision";
    case ErrorCode::kZeroReferenceEdits: return "ZeroReferenceEdits";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kTransport: return "Transport";
    case ErrorCode::kEmptyResponse: return "EmptyResponse";
    case ErrorCode::kExtractionFailure: return "ExtractionFailure";
    case ErrorCode::kUnsupportedMitigation: return "UnsupportedMitigation";
    case ErrorCode::kUsage: return "Usage";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace acrc
