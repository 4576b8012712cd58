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

#include <cstdio>
#include <istream>
#include <stdexcept>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "acrc/error.hpp"

// Minimal RFC 4180 reading and writing.
namespace acrc::csv {

using Row = std::vector<std::string>;

inline std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void write_row(std::ostream& os, const Row& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) os << ',';
    os << quote(row[i]);
  }
  os << '\n';
}

/// Fixed-precision number formatting so outputs are byte-stable.
inline std::string num(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

/// Reads the next record; false at end of input.
inline bool read_row(std::istream& is, Row& row) {
  row.clear();
  std::string field;
  bool quoted = false;
  bool any = false;
  char c;
  while (is.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (is.peek() == '"') {
          is.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (!any) return false;
  if (quoted) throw Error(ErrorCode::kSchemaError, "unterminated quoted CSV field");
  row.push_back(std::move(field));
  return true;
}

/// Header-indexed table.
struct Table {
  Row header;
  std::vector<Row> rows;

  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw Error(ErrorCode::kSchemaError, "missing CSV column: " + std::string(name));
  }
};

inline Table read_table(std::istream& is) {
  Table t;
  if (!read_row(is, t.header)) throw Error(ErrorCode::kSchemaError, "empty CSV input");
  Row r;
  std::size_t line = 1;
  while (read_row(is, r)) {
    ++line;
    if (r.size() == 1 && r[0].empty()) continue;
    if (r.size() != t.header.size()) {
      throw Error(ErrorCode::kSchemaError, "CSV line " + std::to_string(line) + ": expected " +
                                               std::to_string(t.header.size()) + " fields");
    }
    t.rows.push_back(r);
  }
  return t;
}

inline double to_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kSchemaError, "not a number: '" + s + "'");
  }
}

}  // namespace acrc::csv
