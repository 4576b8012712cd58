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
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "acrc/error.hpp"

namespace acrc::stats {

struct FixedEffect {
  std::string name;
  double estimate = 0.0;
  double se = 0.0;
  double z = 0.0;
  double p = 1.0;
  double odds_ratio = 1.0;
  double ci_low = 1.0;  // on the odds-ratio scale
  double ci_high = 1.0;
};

inline constexpr double kZ975 = 1.959963984540054;

inline double logistic(double eta) {
  return eta >= 0 ? 1.0 / (1.0 + std::exp(-eta)) : std::exp(eta) / (1.0 + std::exp(eta));
}

/// log(1 + e^eta) without overflow.
inline double log1pexp(double eta) {
  return eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

inline FixedEffect wald(std::string name, double beta, double se) {
  FixedEffect f;
  f.name = std::move(name);
  f.estimate = beta;
  f.se = se;
  f.z = se > 0 ? beta / se : 0.0;
  f.p = std::erfc(std::abs(f.z) / std::sqrt(2.0));
  f.odds_ratio = std::exp(beta);
  f.ci_low = std::exp(beta - kZ975 * se);
  f.ci_high = std::exp(beta + kZ975 * se);
  return f;
}

inline void require_full_rank(const Eigen::MatrixXd& x) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < x.cols()) {
    throw Error(ErrorCode::kRankDeficient, "design matrix has rank " + std::to_string(qr.rank()) +
                                               " < " + std::to_string(x.cols()) + " columns");
  }
}

struct LogisticFit {
  std::vector<FixedEffect> fixed;
  Eigen::VectorXd beta;
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Plain maximum-likelihood logistic regression by Newton-Raphson (IRLS).
inline LogisticFit fit_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                const std::vector<std::string>& names, int max_iter = 100,
                                double tol = 1e-12) {
  require_full_rank(x);
  const Eigen::Index p = x.cols();
  LogisticFit fit;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  auto loglik = [&](const Eigen::VectorXd& b) {
    const Eigen::VectorXd eta = x * b;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) ll += y(i) * eta(i) - log1pexp(eta(i));
    return ll;
  };
  double ll = loglik(beta);
  Eigen::MatrixXd info(p, p);
  for (fit.iterations = 1; fit.iterations <= max_iter; ++fit.iterations) {
    const Eigen::VectorXd eta = x * beta;
    Eigen::VectorXd mu(eta.size());
    Eigen::VectorXd w(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      mu(i) = logistic(eta(i));
      w(i) = mu(i) * (1.0 - mu(i));
    }
    info = x.transpose() * w.asDiagonal() * x;
    const Eigen::VectorXd step = info.ldlt().solve(x.transpose() * (y - mu));
    double scale = 1.0;
    Eigen::VectorXd next = beta + step;
    double next_ll = loglik(next);
    while (next_ll < ll - 1e-12 && scale > 1e-8) {
      scale /= 2;
      next = beta + scale * step;
      next_ll = loglik(next);
    }
    const double change = (next - beta).cwiseAbs().maxCoeff();
    beta = next;
    ll = next_ll;
    if (change < tol) {
      fit.converged = true;
      break;
    }
  }
  const Eigen::VectorXd eta = x * beta;
  Eigen::VectorXd w(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double m = logistic(eta(i));
    w(i) = m * (1.0 - m);
  }
  info = x.transpose() * w.asDiagonal() * x;
  const Eigen::MatrixXd cov = info.inverse();
  for (Eigen::Index j = 0; j < p; ++j) {
    fit.fixed.push_back(wald(j < static_cast<Eigen::Index>(names.size()) ? names[j] : "x" + std::to_string(j),
                             beta(j), std::sqrt(cov(j, j))));
  }
  fit.beta = beta;
  fit.log_likelihood = ll;
  return fit;
}

}  // namespace acrc::stats
