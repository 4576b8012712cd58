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
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "acrc/error.hpp"
#include "acrc/stats/logistic.hpp"

namespace acrc::stats {

/// One grouping factor of a crossed random-intercepts model.
struct GroupingFactor {
  std::string name;
  std::vector<int> level;           // per observation, in [0, labels.size())
  std::vector<std::string> labels;  // level names
};

struct VarianceComponent {
  std::string name;
  double sigma = 0.0;
  bool fixed = false;
  std::vector<std::pair<std::string, double>> intercepts;

  double variance() const { return sigma * sigma; }
};

struct GlmmOptions {
  // Per factor; a value pins that sigma (0 drops the factor's intercepts).
  std::vector<std::optional<double>> fixed_sigma;
  double tol = 1e-4;  // on log sigma
  double log_sigma_min = -7.0;
  double log_sigma_max = 2.5;
  double initial_sigma = 0.5;
  int max_cycles = 30;
  int max_pirls = 100;
};

struct RegressionFit {
  std::vector<FixedEffect> fixed;
  std::vector<VarianceComponent> components;
  double marginal_r2 = 0.0;
  double conditional_r2 = 0.0;
  double laplace_loglik = 0.0;
  std::size_t n = 0;
  int outer_cycles = 0;
  int objective_evaluations = 0;
  int pirls_iterations = 0;
  bool converged = false;
  bool separation = false;
};

namespace detail {

// Logistic mixed model with spherical random effects v (u = sigma * v).
class Glmm {
 public:
  Glmm(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
       const std::vector<GroupingFactor>& factors, int max_pirls)
      : x_(x), y_(y), factors_(factors), max_pirls_(max_pirls) {
    beta_ = Eigen::VectorXd::Zero(x.cols());
    for (const GroupingFactor& f : factors) {
      offset_.push_back(q_);
      q_ += static_cast<Eigen::Index>(f.labels.size());
    }
    v_ = Eigen::VectorXd::Zero(q_);
  }

  struct Eval {
    double objective = -std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
  };

  // Penalized IRLS at `sigma`, then the Laplace objective.
  Eval run(const std::vector<double>& sigma) {
    set_design(sigma);
    const Eigen::Index p = x_.cols();
    const Eigen::Index k = a_.cols();
    Eigen::VectorXd gamma(k);
    gamma << beta_, active_v();
    Eval e;
    double pl = penalized(gamma);
    for (e.iterations = 1; e.iterations <= max_pirls_; ++e.iterations) {
      const Eigen::VectorXd eta = a_ * gamma;
      Eigen::VectorXd resid(eta.size());
      Eigen::VectorXd w(eta.size());
      weights(eta, resid, w);
      Eigen::VectorXd grad = a_.transpose() * resid;
      grad.tail(k - p) -= gamma.tail(k - p);
      hessian(w);
      const Eigen::VectorXd step = h_.ldlt().solve(grad);
      double scale = 1.0;
      Eigen::VectorXd next = gamma + step;
      double next_pl = penalized(next);
      while (next_pl < pl - 1e-10 * (1.0 + std::abs(pl)) && scale > 1e-10) {
        scale /= 2;
        next = gamma + scale * step;
        next_pl = penalized(next);
      }
      const double change = (next - gamma).cwiseAbs().maxCoeff();
      gamma = next;
      const double gain = next_pl - pl;
      pl = next_pl;
      if (change < 1e-9 || (gain >= 0 && gain < 1e-12 * (1.0 + std::abs(pl)))) {
        e.converged = true;
        break;
      }
    }
    store(gamma);
    Eigen::VectorXd resid(y_.size());
    Eigen::VectorXd w(y_.size());
    weights(a_ * gamma, resid, w);
    hessian(w);
    double logdet = 0.0;
    if (k > p) {
      Eigen::LLT<Eigen::MatrixXd> llt(h_.bottomRightCorner(k - p, k - p));
      const Eigen::MatrixXd& l = llt.matrixLLT();
      for (Eigen::Index i = 0; i < k - p; ++i) logdet += 2.0 * std::log(l(i, i));
    }
    e.objective = pl - 0.5 * logdet;
    return e;
  }

  const Eigen::VectorXd& beta() const { return beta_; }
  const Eigen::MatrixXd& hessian_matrix() const { return h_; }
  double v(std::size_t factor, int level) const { return v_(offset_[factor] + level); }
  Eigen::VectorXd eta() const { return a_ * current(); }

 private:
  void set_design(const std::vector<double>& sigma) {
    sigma_ = sigma;
    active_.clear();
    for (std::size_t g = 0; g < factors_.size(); ++g) {
      if (sigma[g] > 0) active_.push_back(g);
    }
    Eigen::Index k = x_.cols();
    for (std::size_t g : active_) k += static_cast<Eigen::Index>(factors_[g].labels.size());
    a_ = Eigen::MatrixXd::Zero(x_.rows(), k);
    a_.leftCols(x_.cols()) = x_;
    Eigen::Index col = x_.cols();
    for (std::size_t g : active_) {
      const GroupingFactor& f = factors_[g];
      for (Eigen::Index i = 0; i < x_.rows(); ++i) a_(i, col + f.level[i]) = sigma[g];
      col += static_cast<Eigen::Index>(f.labels.size());
    }
  }

  Eigen::VectorXd active_v() const {
    Eigen::VectorXd out(a_.cols() - x_.cols());
    Eigen::Index at = 0;
    for (std::size_t g : active_) {
      const auto n = static_cast<Eigen::Index>(factors_[g].labels.size());
      out.segment(at, n) = v_.segment(offset_[g], n);
      at += n;
    }
    return out;
  }

  Eigen::VectorXd current() const {
    Eigen::VectorXd gamma(a_.cols());
    gamma << beta_, active_v();
    return gamma;
  }

  void store(const Eigen::VectorXd& gamma) {
    beta_ = gamma.head(x_.cols());
    v_.setZero();
    Eigen::Index at = x_.cols();
    for (std::size_t g : active_) {
      const auto n = static_cast<Eigen::Index>(factors_[g].labels.size());
      v_.segment(offset_[g], n) = gamma.segment(at, n);
      at += n;
    }
  }

  double penalized(const Eigen::VectorXd& gamma) const {
    const Eigen::VectorXd eta = a_ * gamma;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) ll += y_(i) * eta(i) - log1pexp(eta(i));
    return ll - 0.5 * gamma.tail(a_.cols() - x_.cols()).squaredNorm();
  }

  void weights(const Eigen::VectorXd& eta, Eigen::VectorXd& resid, Eigen::VectorXd& w) const {
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      const double mu = logistic(eta(i));
      resid(i) = y_(i) - mu;
      w(i) = mu * (1.0 - mu);
    }
  }

  void hessian(const Eigen::VectorXd& w) {
    const Eigen::Index p = x_.cols();
    const Eigen::Index k = a_.cols();
    h_ = a_.transpose() * w.asDiagonal() * a_;
    for (Eigen::Index j = p; j < k; ++j) h_(j, j) += 1.0;
  }

  const Eigen::MatrixXd& x_;
  const Eigen::VectorXd& y_;
  const std::vector<GroupingFactor>& factors_;
  int max_pirls_;
  std::vector<Eigen::Index> offset_;
  Eigen::Index q_ = 0;
  Eigen::VectorXd beta_;
  Eigen::VectorXd v_;
  std::vector<double> sigma_;
  std::vector<std::size_t> active_;
  Eigen::MatrixXd a_;
  Eigen::MatrixXd h_;
};

inline double sample_variance(const Eigen::VectorXd& v) {
  if (v.size() < 2) return 0.0;
  const double mean = v.mean();
  return (v.array() - mean).square().sum() / static_cast<double>(v.size() - 1);
}

}  // namespace detail

/// Crossed random-intercepts logistic regression by Laplace approximation.
inline RegressionFit fit_glmm(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                              const std::vector<std::string>& names,
                              const std::vector<GroupingFactor>& factors,
                              const GlmmOptions& opts = {}) {
  if (x.rows() != y.size() || x.rows() == 0) {
    throw Error(ErrorCode::kInvalidInput, "design and outcome sizes differ or are empty");
  }
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y(i) != 0.0 && y(i) != 1.0) throw Error(ErrorCode::kInvalidInput, "outcome must be 0/1");
  }
  for (const GroupingFactor& f : factors) {
    if (f.level.size() != static_cast<std::size_t>(x.rows())) {
      throw Error(ErrorCode::kInvalidInput, "factor " + f.name + " has the wrong length");
    }
    if (f.labels.size() < 2) {
      throw Error(ErrorCode::kInvalidInput, "factor " + f.name + " needs at least two levels");
    }
  }
  require_full_rank(x);

  const std::size_t nf = factors.size();
  std::vector<bool> free(nf, true);
  std::vector<double> sigma(nf, opts.initial_sigma);
  for (std::size_t g = 0; g < nf && g < opts.fixed_sigma.size(); ++g) {
    if (opts.fixed_sigma[g]) {
      free[g] = false;
      sigma[g] = *opts.fixed_sigma[g];
    }
  }

  detail::Glmm model(x, y, factors, opts.max_pirls);
  RegressionFit fit;
  auto evaluate = [&](const std::vector<double>& s) {
    ++fit.objective_evaluations;
    const auto e = model.run(s);
    fit.pirls_iterations += e.iterations;
    return e.objective;
  };

  // Golden-section search on log sigma, one factor at a time.
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  evaluate(sigma);  // warm start
  bool settled = std::none_of(free.begin(), free.end(), [](bool b) { return b; });
  for (fit.outer_cycles = 0; !settled && fit.outer_cycles < opts.max_cycles;) {
    ++fit.outer_cycles;
    double moved = 0.0;
    for (std::size_t g = 0; g < nf; ++g) {
      if (!free[g]) continue;
      const double before = sigma[g];
      auto at = [&](double t) {
        std::vector<double> s = sigma;
        s[g] = std::exp(t);
        return evaluate(s);
      };
      double lo = opts.log_sigma_min;
      double hi = opts.log_sigma_max;
      if (fit.outer_cycles > 1 && sigma[g] > 0) {
        lo = std::max(lo, std::log(sigma[g]) - 1.0);
        hi = std::min(hi, std::log(sigma[g]) + 1.0);
      }
      double t = 0.0;
      double ft = 0.0;
      for (int widen = 0; widen < 2; ++widen) {
        double a = lo;
        double b = hi;
        double c = b - phi * (b - a);
        double d = a + phi * (b - a);
        double fc = at(c);
        double fd = at(d);
        while (b - a > opts.tol) {
          if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = at(c);
          } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = at(d);
          }
        }
        t = fc >= fd ? c : d;
        ft = std::max(fc, fd);
        const bool at_edge = (t - lo < 2 * opts.tol && lo > opts.log_sigma_min) ||
                             (hi - t < 2 * opts.tol && hi < opts.log_sigma_max);
        if (!at_edge) break;
        lo = opts.log_sigma_min;
        hi = opts.log_sigma_max;
      }
      std::vector<double> zero = sigma;
      zero[g] = 0.0;
      const double f0 = evaluate(zero);
      sigma[g] = f0 >= ft ? 0.0 : std::exp(t);
      const double la = before > 0 ? std::log(before) : opts.log_sigma_min;
      const double lb = sigma[g] > 0 ? std::log(sigma[g]) : opts.log_sigma_min;
      moved = std::max(moved, std::abs(la - lb));
    }
    settled = moved < opts.tol;
  }
  fit.converged = settled;

  const auto final_eval = model.run(sigma);
  fit.converged = fit.converged && final_eval.converged;
  fit.laplace_loglik = final_eval.objective;

  const Eigen::Index p = x.cols();
  const Eigen::MatrixXd cov = model.hessian_matrix().inverse();
  for (Eigen::Index j = 0; j < p; ++j) {
    fit.fixed.push_back(wald(j < static_cast<Eigen::Index>(names.size()) ? names[j]
                                                                           : "x" + std::to_string(j),
                             model.beta()(j), std::sqrt(cov(j, j))));
  }
  double random_variance = 0.0;
  for (std::size_t g = 0; g < nf; ++g) {
    VarianceComponent c;
    c.name = factors[g].name;
    c.sigma = sigma[g];
    c.fixed = !free[g];
    for (std::size_t l = 0; l < factors[g].labels.size(); ++l) {
      c.intercepts.emplace_back(factors[g].labels[l], sigma[g] * model.v(g, static_cast<int>(l)));
    }
    random_variance += c.variance();
    fit.components.push_back(std::move(c));
  }
  const double vf = detail::sample_variance(x * model.beta());
  const double residual = std::numbers::pi * std::numbers::pi / 3.0;
  const double total = vf + random_variance + residual;
  fit.marginal_r2 = vf / total;
  fit.conditional_r2 = (vf + random_variance) / total;
  fit.n = static_cast<std::size_t>(x.rows());
  fit.separation = model.eta().cwiseAbs().maxCoeff() > 20.0;
  return fit;
}

}  // namespace acrc::stats
