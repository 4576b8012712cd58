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
#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "acrc/error.hpp"
#include "acrc/java/parser.hpp"
#include "acrc/spp/types.hpp"

namespace acrc::harness {

struct Rejection {
  std::size_t line = 0;  // 1-based
  ErrorCode code = ErrorCode::kSchemaError;
  std::string message;
};

struct Dataset {
  std::vector<ReviewInstance> instances;
  std::vector<Rejection> rejected;
};

namespace detail {

inline std::string string_field(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorCode::kSchemaError, std::string("missing field '") + key + "'");
  if (!it->is_string()) {
    throw Error(ErrorCode::kSchemaError, std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

}  // namespace detail

/// Reads one instance per JSON line. Bad lines are collected, not fatal.
inline Dataset read_dataset(std::istream& in) {
  Dataset d;
  std::set<std::string> ids;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kSchemaError, std::string("invalid JSON: ") + e.what());
      }
      if (!j.is_object()) throw Error(ErrorCode::kSchemaError, "expected a JSON object");
      ReviewInstance inst{detail::string_field(j, "id"), detail::string_field(j, "code"),
                          detail::string_field(j, "comment"), detail::string_field(j, "revision")};
      if (!ids.insert(inst.id).second) {
        throw Error(ErrorCode::kSchemaError, "duplicate id '" + inst.id + "'");
      }
      java::parse_method(inst.code, {java::TagPolicy::kRequired});
      java::parse_method(inst.revision, {java::TagPolicy::kForbidden});
      d.instances.push_back(std::move(inst));
    } catch (const Error& e) {
      d.rejected.push_back({no, e.code(), e.what()});
    }
  }
  return d;
}

inline Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open dataset '" + path + "'");
  return read_dataset(in);
}

// Variant store.

inline nlohmann::json to_json(const spp::PerturbedVariant& v) {
  nlohmann::json spans = nlohmann::json::array();
  for (const spp::Span& s : v.spans) spans.push_back({s.start, s.end});
  return {{"instance_id", v.instance_id}, {"ptype", spp::ptype_id(v.ptype)},
          {"seed", v.seed},               {"code", v.code},
          {"revision", v.revision},       {"comment", v.comment},
          {"spans", spans}};
}

inline void write_variants(std::ostream& out, const std::vector<spp::PerturbedVariant>& vs) {
  for (const auto& v : vs) out << to_json(v).dump() << '\n';
}

inline std::vector<spp::PerturbedVariant> read_variants(std::istream& in) {
  std::vector<spp::PerturbedVariant> out;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      spp::PerturbedVariant v;
      v.instance_id = j.at("instance_id").get<std::string>();
      const auto p = spp::parse_ptype(j.at("ptype").get<std::string>());
      if (!p) throw Error(ErrorCode::kSchemaError, "unknown ptype");
      v.ptype = *p;
      v.seed = j.at("seed").get<std::uint64_t>();
      v.code = j.at("code").get<std::string>();
      v.revision = j.at("revision").get<std::string>();
      v.comment = j.at("comment").get<std::string>();
      for (const auto& s : j.at("spans")) {
        v.spans.push_back({s.at(0).get<std::size_t>(), s.at(1).get<std::size_t>()});
      }
      out.push_back(std::move(v));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kSchemaError,
                  "variants line " + std::to_string(no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.code(), "variants line " + std::to_string(no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace acrc::harness
