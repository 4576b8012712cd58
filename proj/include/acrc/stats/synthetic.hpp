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
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "acrc/features.hpp"
#include "acrc/stats/observations.hpp"

namespace acrc::stats {

// Simulated observations drawn from the crossed random-intercepts model on
// the standardized design. Realized group intercepts are centred and scaled
// to root-mean-square sigma so the fixed intercept is identified.
struct SyntheticSpec {
  std::size_t n = 5000;
  int ptype_levels = 9;
  int model_levels = 5;
  double sigma_ptype = 0.5;
  double sigma_model = 0.5;
  std::map<std::string, double> beta = {
      {"(intercept)", 1.0},       {"distance", 0.12},          {"tok_edit_in", -0.18},
      {"pos[inside]", -0.34},     {"input_length", -0.02},     {"pos[overlap-after]", -0.25},
      {"pos[after]", -0.10},      {"tok_edit_task", -0.15},
  };
};

struct SyntheticData {
  std::vector<ObservationRow> rows;
  std::vector<double> ptype_effects;
  std::vector<double> model_effects;
};

namespace detail {

inline std::vector<double> group_effects(int levels, double sigma, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> u(static_cast<std::size_t>(levels));
  double mean = 0;
  for (double& x : u) mean += (x = normal(rng));
  mean /= levels;
  double ss = 0;
  for (double& x : u) {
    x -= mean;
    ss += x * x;
  }
  const double rms = std::sqrt(ss / levels);
  for (double& x : u) x = rms > 0 ? x * sigma / rms : 0.0;
  return u;
}

}  // namespace detail

inline SyntheticData simulate(const SyntheticSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SyntheticData out;
  out.ptype_effects = detail::group_effects(spec.ptype_levels, spec.sigma_ptype, rng);
  out.model_effects = detail::group_effects(spec.model_levels, spec.sigma_model, rng);

  const features::Position kLevels[] = {features::Position::kBefore, features::Position::kInside,
                                        features::Position::kOverlapAfter,
                                        features::Position::kAfter};
  std::exponential_distribution<double> dist(1.0 / 15.0);
  std::poisson_distribution<int> tok_in(8.0);
  std::poisson_distribution<int> tok_task(3.0);
  std::poisson_distribution<int> length(120.0);
  for (std::size_t i = 0; i < spec.n; ++i) {
    ObservationRow r;
    r.instance_id = "s" + std::to_string(i);
    r.ptype = "p" + std::to_string(1 + rng() % static_cast<std::uint64_t>(spec.ptype_levels));
    r.model = "m" + std::to_string(1 + rng() % static_cast<std::uint64_t>(spec.model_levels));
    r.pos = kLevels[rng() % 4];
    r.distance = r.pos == features::Position::kInside ? 0.0 : std::floor(dist(rng));
    r.tok_edit_in = 1 + tok_in(rng);
    r.tok_edit_task = 1 + tok_task(rng);
    r.input_length = 20 + length(rng);
    out.rows.push_back(r);
  }

  const Design d = build_design(out.rows, true);
  for (Eigen::Index i = 0; i < d.x.rows(); ++i) {
    double eta = 0;
    for (std::size_t j = 0; j < d.names.size(); ++j) {
      auto it = spec.beta.find(d.names[j]);
      if (it != spec.beta.end()) eta += it->second * d.x(i, static_cast<Eigen::Index>(j));
    }
    eta += out.ptype_effects[static_cast<std::size_t>(d.factors[0].level[i])];
    eta += out.model_effects[static_cast<std::size_t>(d.factors[1].level[i])];
    const double p = 1.0 / (1.0 + std::exp(-eta));
    out.rows[static_cast<std::size_t>(i)].exm =
        std::bernoulli_distribution(p)(rng) ? 1 : 0;
  }
  return out;
}

}  // namespace acrc::stats
