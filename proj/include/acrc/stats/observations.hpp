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
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "acrc/csv.hpp"
#include "acrc/error.hpp"
#include "acrc/features.hpp"
#include "acrc/stats/diagnostics.hpp"
#include "acrc/stats/glmm.hpp"

namespace acrc::stats {

/// One scored variant: EXM outcome, its features, and its two groups.
struct ObservationRow {
  std::string instance_id;
  std::string model;
  std::string ptype;
  int exm = 0;
  features::Position pos = features::Position::kBefore;
  double distance = 0.0;
  double tok_edit_in = 0.0;
  double tok_edit_task = 0.0;
  double input_length = 0.0;
};

inline const csv::Row& observation_header() {
  static const csv::Row h{"instance_id", "model",       "ptype",         "exm",
                          "pos",         "distance",    "tok_edit_in",   "tok_edit_task",
                          "input_length"};
  return h;
}

inline void write_observations(std::ostream& os, const std::vector<ObservationRow>& rows) {
  csv::write_row(os, observation_header());
  for (const ObservationRow& r : rows) {
    csv::write_row(os, {r.instance_id, r.model, r.ptype, std::to_string(r.exm),
                        std::string(features::position_name(r.pos)), csv::num(r.distance),
                        csv::num(r.tok_edit_in), csv::num(r.tok_edit_task),
                        csv::num(r.input_length)});
  }
}

inline std::vector<ObservationRow> read_observations(std::istream& is) {
  const csv::Table t = csv::read_table(is);
  const std::size_t c_id = t.column("instance_id");
  const std::size_t c_model = t.column("model");
  const std::size_t c_ptype = t.column("ptype");
  const std::size_t c_exm = t.column("exm");
  const std::size_t c_pos = t.column("pos");
  const std::size_t c_dist = t.column("distance");
  const std::size_t c_in = t.column("tok_edit_in");
  const std::size_t c_task = t.column("tok_edit_task");
  const std::size_t c_len = t.column("input_length");
  std::vector<ObservationRow> out;
  for (const csv::Row& r : t.rows) {
    ObservationRow o;
    o.instance_id = r[c_id];
    o.model = r[c_model];
    o.ptype = r[c_ptype];
    if (r[c_exm] != "0" && r[c_exm] != "1") {
      throw Error(ErrorCode::kSchemaError, "exm must be 0 or 1, got '" + r[c_exm] + "'");
    }
    o.exm = r[c_exm] == "1" ? 1 : 0;
    const auto pos = features::parse_position(r[c_pos]);
    if (!pos) throw Error(ErrorCode::kSchemaError, "unknown position '" + r[c_pos] + "'");
    o.pos = *pos;
    o.distance = csv::to_double(r[c_dist]);
    o.tok_edit_in = csv::to_double(r[c_in]);
    o.tok_edit_task = csv::to_double(r[c_task]);
    o.input_length = csv::to_double(r[c_len]);
    out.push_back(std::move(o));
  }
  return out;
}

/// Dummy-coded design: intercept, one column per observed non-Before
/// position, then the four continuous features.
struct Design {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  std::vector<std::string> names;
  std::vector<GroupingFactor> factors;  // ptype, model
  std::vector<Eigen::Index> continuous;  // column indices
  std::vector<std::string> dropped;      // position levels with no rows
};

inline constexpr const char* kContinuousNames[] = {"distance", "tok_edit_in", "tok_edit_task",
                                                   "input_length"};

inline std::string dummy_name(features::Position p) {
  return "pos[" + std::string(features::position_name(p)) + "]";
}

/// z-score with the n-1 standard deviation; constant columns only centre.
inline void standardize_column(Eigen::Ref<Eigen::VectorXd> c) {
  const double mean = c.mean();
  c.array() -= mean;
  if (c.size() < 2) return;
  const double sd = std::sqrt(c.squaredNorm() / static_cast<double>(c.size() - 1));
  if (sd > 0) c /= sd;
}

inline GroupingFactor make_factor(std::string name, const std::vector<std::string>& values) {
  GroupingFactor f;
  f.name = std::move(name);
  std::map<std::string, int> index;
  for (const auto& v : values) index.emplace(v, 0);
  for (auto& [label, i] : index) {
    i = static_cast<int>(f.labels.size());
    f.labels.push_back(label);
  }
  for (const auto& v : values) f.level.push_back(index.at(v));
  return f;
}

inline Design build_design(const std::vector<ObservationRow>& rows, bool standardize = true) {
  if (rows.empty()) throw Error(ErrorCode::kEmptyInput, "no observations");
  Design d;
  std::vector<features::Position> levels;
  for (features::Position p : features::kAllPositions) {
    if (p == features::Position::kBefore) continue;
    const bool seen = std::any_of(rows.begin(), rows.end(), [&](const auto& r) { return r.pos == p; });
    (seen ? levels.push_back(p) : d.dropped.push_back(dummy_name(p)));
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto k = static_cast<Eigen::Index>(1 + levels.size() + 4);
  d.x = Eigen::MatrixXd::Zero(n, k);
  d.y.resize(n);
  d.names.push_back("(intercept)");
  for (features::Position p : levels) d.names.push_back(dummy_name(p));
  for (const char* c : kContinuousNames) d.names.push_back(c);
  std::vector<std::string> ptypes;
  std::vector<std::string> models;
  for (Eigen::Index i = 0; i < n; ++i) {
    const ObservationRow& r = rows[static_cast<std::size_t>(i)];
    d.y(i) = r.exm;
    d.x(i, 0) = 1.0;
    for (std::size_t l = 0; l < levels.size(); ++l) {
      if (r.pos == levels[l]) d.x(i, static_cast<Eigen::Index>(1 + l)) = 1.0;
    }
    const Eigen::Index c = static_cast<Eigen::Index>(1 + levels.size());
    d.x(i, c) = r.distance;
    d.x(i, c + 1) = r.tok_edit_in;
    d.x(i, c + 2) = r.tok_edit_task;
    d.x(i, c + 3) = r.input_length;
    ptypes.push_back(r.ptype);
    models.push_back(r.model);
  }
  for (Eigen::Index j = k - 4; j < k; ++j) {
    d.continuous.push_back(j);
    if (standardize) standardize_column(d.x.col(j));
  }
  d.factors.push_back(make_factor("ptype", ptypes));
  d.factors.push_back(make_factor("model", models));
  return d;
}

inline RegressionFit fit_observations(const std::vector<ObservationRow>& rows,
                                      bool standardize = true, const GlmmOptions& opts = {}) {
  const Design d = build_design(rows, standardize);
  return fit_glmm(d.x, d.y, d.names, d.factors, opts);
}

inline Diagnostics diagnose(const Design& d) {
  Eigen::MatrixXd cols(d.x.rows(), static_cast<Eigen::Index>(d.continuous.size()));
  std::vector<std::string> names;
  for (std::size_t j = 0; j < d.continuous.size(); ++j) {
    cols.col(static_cast<Eigen::Index>(j)) = d.x.col(d.continuous[j]);
    names.push_back(d.names[static_cast<std::size_t>(d.continuous[j])]);
  }
  return diagnose(cols, names);
}

}  // namespace acrc::stats
