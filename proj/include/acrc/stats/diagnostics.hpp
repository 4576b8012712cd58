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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "acrc/error.hpp"

namespace acrc::stats {

inline constexpr double kRhoThreshold = 0.7;
inline constexpr double kVifThreshold = 5.0;

/// 1-based ranks; ties share their average rank.
inline std::vector<double> average_ranks(const std::vector<double>& x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = (static_cast<double>(i + j) / 2.0) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

inline std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0;
  double sxx = 0;
  double syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0 || syy <= 0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Spearman's rho; absent when either input is constant.
inline std::optional<double> spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::kInvalidInput, "spearman needs two equal-length vectors of size >= 2");
  }
  return pearson(average_ranks(x), average_ranks(y));
}

struct Vif {
  double value = 1.0;
  bool infinite = false;  // column is an exact linear combination of the others
};

/// Variance inflation factor of every column (columns exclude the intercept).
inline std::vector<Vif> vif(const Eigen::MatrixXd& columns) {
  const Eigen::Index n = columns.rows();
  const Eigen::Index k = columns.cols();
  if (k < 2 || n < k + 1) {
    throw Error(ErrorCode::kInvalidInput, "vif needs >= 2 columns and >= columns + 1 rows");
  }
  std::vector<Vif> out;
  for (Eigen::Index j = 0; j < k; ++j) {
    Eigen::MatrixXd others(n, k);
    others.col(0).setOnes();
    for (Eigen::Index c = 0, at = 1; c < k; ++c) {
      if (c != j) others.col(at++) = columns.col(c);
    }
    const Eigen::VectorXd y = columns.col(j);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(others);
    const Eigen::VectorXd fitted = others * qr.solve(y);
    const double sst = (y.array() - y.mean()).square().sum();
    const double sse = (y - fitted).squaredNorm();
    Vif v;
    if (sst <= 0 || sse <= 1e-12 * sst) {
      v.infinite = true;
      v.value = std::numeric_limits<double>::infinity();
    } else {
      v.value = sst / sse;  // 1 / (1 - R^2)
    }
    out.push_back(v);
  }
  return out;
}

inline bool rho_flag(std::optional<double> rho) {
  return rho && std::abs(*rho) > kRhoThreshold;
}

inline bool vif_flag(const Vif& v) { return v.infinite || v.value > kVifThreshold; }

struct CorrelationEntry {
  std::string a;
  std::string b;
  std::optional<double> rho;
  bool flagged = false;
};

struct Diagnostics {
  std::vector<CorrelationEntry> correlations;
  std::vector<std::pair<std::string, Vif>> vifs;
};

inline Diagnostics diagnose(const Eigen::MatrixXd& columns, const std::vector<std::string>& names) {
  Diagnostics d;
  const Eigen::Index k = columns.cols();
  std::vector<std::vector<double>> cols(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    cols[j].assign(columns.col(j).data(), columns.col(j).data() + columns.rows());
  }
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = a + 1; b < k; ++b) {
      CorrelationEntry e{names[a], names[b], spearman(cols[a], cols[b]), false};
      e.flagged = rho_flag(e.rho);
      d.correlations.push_back(e);
    }
  }
  const auto v = vif(columns);
  for (Eigen::Index j = 0; j < k; ++j) d.vifs.emplace_back(names[j], v[j]);
  return d;
}

}  // namespace acrc::stats
