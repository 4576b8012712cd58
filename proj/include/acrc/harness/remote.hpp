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

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"

#include "acrc/error.hpp"
#include "acrc/harness/adapter.hpp"

namespace acrc::harness {

inline constexpr const char* kApiKeyVariable = "ACR_API_KEY";

struct HttpRequest {
  std::string path;
  std::string body;
  std::string bearer;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// Throws Error(kTransport) when no response arrives at all.
using Transport = std::function<HttpResponse(const HttpRequest&)>;

struct RemoteConfig {
  std::string base_url;  // scheme://host[:port]
  std::string path = "/v1/chat/completions";
  std::string model;
  bool instruction_tuned = true;
};

/// Reads endpoint settings from JSON. Credentials are refused here.
inline RemoteConfig read_remote_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open adapter config '" + file + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaError, file + ": " + e.what());
  }
  for (const char* secret : {"api_key", "apiKey", "key", "token", "authorization"}) {
    if (j.contains(secret)) {
      throw Error(ErrorCode::kSchemaError, std::string("adapter config must not contain '") +
                                               secret + "'; set " + kApiKeyVariable + " instead");
    }
  }
  RemoteConfig c;
  try {
    c.base_url = j.at("endpoint").get<std::string>();
    c.model = j.at("model").get<std::string>();
    c.path = j.value("path", c.path);
    c.instruction_tuned = j.value("instruction_tuned", true);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaError, file + ": " + e.what());
  }
  return c;
}

inline Transport http_transport(const std::string& base_url, int timeout_seconds) {
  return [base_url, timeout_seconds](const HttpRequest& req) {
    httplib::Client client(base_url);
    client.set_connection_timeout(timeout_seconds);
    client.set_read_timeout(timeout_seconds);
    client.set_write_timeout(timeout_seconds);
    httplib::Headers headers;
    if (!req.bearer.empty()) headers.emplace("Authorization", "Bearer " + req.bearer);
    auto res = client.Post(req.path, headers, req.body, "application/json");
    if (!res) throw Error(ErrorCode::kTransport, "request failed: " + httplib::to_string(res.error()));
    return HttpResponse{res->status, res->body};
  };
}

class RemoteAdapter : public Adapter {
 public:
  RemoteAdapter(RemoteConfig cfg, AdapterConfig opts, Transport transport, std::string api_key,
                std::chrono::milliseconds backoff = std::chrono::milliseconds(500))
      : cfg_(std::move(cfg)),
        opts_(std::move(opts)),
        transport_(std::move(transport)),
        key_(std::move(api_key)),
        backoff_(backoff) {}

  std::string model() const override { return cfg_.model; }
  bool instruction_tuned() const override { return cfg_.instruction_tuned; }

  std::vector<std::string> query(const Query& q, int n) override {
    const nlohmann::json body = {
        {"model", cfg_.model},
        {"messages", {{{"role", "user"}, {"content", q.prompt}}}},
        {"temperature", opts_.temperature},
        {"n", n},
    };
    const HttpRequest req{cfg_.path, body.dump(), key_};
    std::string last_error;
    for (int attempt = 0; attempt <= opts_.retries; ++attempt) {
      if (attempt > 0) std::this_thread::sleep_for(backoff_ * attempt);
      HttpResponse res;
      try {
        res = transport_(req);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kTransport) throw;
        last_error = e.what();
        continue;
      }
      if (res.status == 429 || res.status >= 500) {
        last_error = "HTTP " + std::to_string(res.status);
        continue;
      }
      if (res.status != 200) {
        throw Error(ErrorCode::kTransport, "HTTP " + std::to_string(res.status) + ": " + res.body);
      }
      return parse_choices(res.body);
    }
    throw Error(ErrorCode::kTransport, "retry budget exhausted: " + last_error);
  }

  static std::vector<std::string> parse_choices(const std::string& body) {
    std::vector<std::string> out;
    try {
      const auto j = nlohmann::json::parse(body);
      for (const auto& c : j.at("choices")) {
        auto text = c.at("message").at("content").get<std::string>();
        if (!text.empty()) out.push_back(std::move(text));
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kEmptyResponse, std::string("malformed completion: ") + e.what());
    }
    if (out.empty()) throw Error(ErrorCode::kEmptyResponse, "completion has no content");
    return out;
  }

 private:
  RemoteConfig cfg_;
  AdapterConfig opts_;
  Transport transport_;
  std::string key_;
  std::chrono::milliseconds backoff_;
};

/// "mock:..." or "remote:<config.json>". The API key is read from the
/// environment only.
inline std::unique_ptr<Adapter> make_adapter(const AdapterConfig& opts) {
  const std::string& d = opts.endpoint;
  if (d.rfind("mock:", 0) == 0) return make_mock(d);
  if (d.rfind("remote:", 0) == 0) {
    RemoteConfig cfg = read_remote_config(d.substr(7));
    const char* key = std::getenv(kApiKeyVariable);
    if (key == nullptr || *key == '\0') {
      throw Error(ErrorCode::kUsage, std::string(kApiKeyVariable) + " is not set");
    }
    Transport t = http_transport(cfg.base_url, opts.timeout_seconds);
    return std::make_unique<RemoteAdapter>(std::move(cfg), opts, std::move(t), key);
  }
  throw Error(ErrorCode::kUsage, "unknown adapter '" + d + "'");
}

}  // namespace acrc::harness
