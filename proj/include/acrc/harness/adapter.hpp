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

#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "acrc/error.hpp"
#include "acrc/harness/prompt.hpp"
#include "acrc/lexer.hpp"

namespace acrc::harness {

struct AdapterConfig {
  std::string endpoint;  // adapter descriptor, e.g. "mock:echo-gt"
  double temperature = 0.2;
  int samples = 10;
  Mitigation mitigation = Mitigation::kNone;
  int timeout_seconds = 60;
  int max_parallel = 4;
  int retries = 3;

  void validate() const {
    if (temperature < 0) throw Error(ErrorCode::kUsage, "temperature must be >= 0");
    if (samples < 1) throw Error(ErrorCode::kUsage, "samples must be >= 1");
    if (max_parallel < 1) throw Error(ErrorCode::kUsage, "max parallel must be >= 1");
    if (retries < 0) throw Error(ErrorCode::kUsage, "retry budget must be >= 0");
  }
};

/// What a model is asked. Mocks also see the reference, which remote
/// adapters never send.
struct Query {
  std::string key;        // instance id, or "<instance id>/<ptype>" for variants
  std::string prompt;
  std::string input;      // tagged code shown to the model
  std::string reference;  // expected revision
};

class Adapter {
 public:
  virtual ~Adapter() = default;
  virtual std::string model() const = 0;
  virtual bool instruction_tuned() const { return true; }
  /// Raw responses; at most n.
  virtual std::vector<std::string> query(const Query& q, int n) = 0;
};

enum class MockMode { kEchoGt, kEchoInput, kGtPlusNoise, kScripted };

/// Statement the noisy mock adds in front of the reference body.
inline constexpr std::string_view kNoiseStatement = "int acrcNoise = 0;";

inline std::string add_noise(std::string_view revision) {
  const auto brace = revision.find('{');
  if (brace == std::string_view::npos) return std::string(revision);
  std::string out(revision.substr(0, brace + 1));
  out += ' ';
  out += kNoiseStatement;
  out += revision.substr(brace + 1);
  return out;
}

class MockAdapter : public Adapter {
 public:
  MockAdapter(MockMode mode, bool instruction_tuned = true,
              std::map<std::string, std::vector<std::string>> script = {})
      : mode_(mode), tuned_(instruction_tuned), script_(std::move(script)) {}

  std::string model() const override {
    switch (mode_) {
      case MockMode::kEchoGt: return "mock-echo-gt";
      case MockMode::kEchoInput: return "mock-echo-input";
      case MockMode::kGtPlusNoise: return "mock-gt-plus-noise";
      case MockMode::kScripted: return "mock-scripted";
    }
    return "mock";
  }

  bool instruction_tuned() const override { return tuned_; }

  std::vector<std::string> query(const Query& q, int n) override {
    std::string answer;
    switch (mode_) {
      case MockMode::kEchoGt:
        answer = q.reference;
        break;
      case MockMode::kEchoInput:
        answer = join_tokens(strip_tags(tokenize(q.input)));
        break;
      case MockMode::kGtPlusNoise:
        answer = add_noise(q.reference);
        break;
      case MockMode::kScripted: {
        auto it = script_.find(q.key);
        if (it == script_.end() || it->second.empty()) {
          throw Error(ErrorCode::kEmptyResponse, "no scripted response for '" + q.key + "'");
        }
        const auto count = std::min<std::size_t>(it->second.size(), static_cast<std::size_t>(n));
        return {it->second.begin(), it->second.begin() + static_cast<std::ptrdiff_t>(count)};
      }
    }
    return std::vector<std::string>(static_cast<std::size_t>(n), "```java\n" + answer + "\n```");
  }

 private:
  MockMode mode_;
  bool tuned_;
  std::map<std::string, std::vector<std::string>> script_;
};

/// Scripted responses: one JSON object per line, {"key": ..., "responses": [...]}.
inline std::map<std::string, std::vector<std::string>> load_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open script '" + path + "'");
  std::map<std::string, std::vector<std::string>> out;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      out[j.at("key").get<std::string>()] = j.at("responses").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kSchemaError, path + ":" + std::to_string(no) + ": " + e.what());
    }
  }
  return out;
}

/// Parses "mock:<mode>[,base]" where mode is echo-gt, echo-input,
/// gt-plus-noise or scripted=<file>; ",base" marks a model that is not
/// instruction-tuned.
inline std::unique_ptr<Adapter> make_mock(std::string_view desc) {
  if (desc.substr(0, 5) != "mock:") throw Error(ErrorCode::kUsage, "not a mock adapter");
  std::string_view mode = desc.substr(5);
  bool tuned = true;
  if (mode.size() > 5 && mode.substr(mode.size() - 5) == ",base") {
    tuned = false;
    mode.remove_suffix(5);
  }
  if (mode == "echo-gt") return std::make_unique<MockAdapter>(MockMode::kEchoGt, tuned);
  if (mode == "echo-input") return std::make_unique<MockAdapter>(MockMode::kEchoInput, tuned);
  if (mode == "gt-plus-noise") return std::make_unique<MockAdapter>(MockMode::kGtPlusNoise, tuned);
  if (mode.substr(0, 9) == "scripted=") {
    return std::make_unique<MockAdapter>(MockMode::kScripted, tuned,
                                         load_script(std::string(mode.substr(9))));
  }
  throw Error(ErrorCode::kUsage, "unknown mock mode '" + std::string(mode) + "'");
}

}  // namespace acrc::harness
