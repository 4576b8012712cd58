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
#include <atomic>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "acrc/csv.hpp"
#include "acrc/features.hpp"
#include "acrc/harness/adapter.hpp"
#include "acrc/harness/extract.hpp"
#include "acrc/harness/prompt.hpp"
#include "acrc/metrics/metrics.hpp"
#include "acrc/spp/types.hpp"
#include "acrc/stats/observations.hpp"
#include "acrc/stats/summary.hpp"

namespace acrc::harness {

// Subsets.

struct SubsetIndex {
  std::map<std::string, std::set<std::string>> solvable;  // per model
  std::set<std::string> intersection;
};

/// `results[model][instance]` is true when any sample was an exact match.
inline SubsetIndex compute_subsets(const std::map<std::string, std::map<std::string, bool>>& results) {
  SubsetIndex s;
  bool first = true;
  for (const auto& [model, per_instance] : results) {
    auto& solved = s.solvable[model];
    for (const auto& [id, ok] : per_instance) {
      if (ok) solved.insert(id);
    }
    if (first) {
      s.intersection = solved;
      first = false;
    } else {
      std::set<std::string> keep;
      std::set_intersection(s.intersection.begin(), s.intersection.end(), solved.begin(),
                            solved.end(), std::inserter(keep, keep.end()));
      s.intersection = std::move(keep);
    }
  }
  return s;
}

// Parallel map with at most `workers` threads; results land by index.
inline void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  const auto count = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  if (count <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < count; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

// Scoring.

struct Scored {
  metrics::MetricsRecord best;
  int samples = 0;
  int extraction_failures = 0;
};

inline auto rank(const metrics::MetricsRecord& m) {
  return std::make_tuple(m.exm, m.em, -m.ree.value_or(0.0), m.codebleu);
}

/// Best-of-n: exact match first, then edit match, lower REE, higher CodeBLEU.
inline Scored score_samples(const std::string& input, const std::string& reference,
                            const std::vector<std::string>& responses,
                            const metrics::CodeBleuWeights& w = {}) {
  Scored s;
  bool have = false;
  for (const std::string& r : responses) {
    ++s.samples;
    const auto cand = extract_method(r);
    if (!cand) ++s.extraction_failures;
    metrics::MetricsRecord m;
    try {
      m = metrics::evaluate(input, cand.value_or(""), reference, w);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kZeroReferenceEdits) throw;
      m.exm = false;
      m.em = false;
      m.codebleu = metrics::codebleu(cand.value_or(""), reference, w).score;
    }
    if (!have || rank(m) > rank(s.best)) s.best = m;
    have = true;
  }
  if (!have) throw Error(ErrorCode::kEmptyResponse, "no samples");
  return s;
}

struct RunOptions {
  int samples = 10;
  Mitigation mitigation = Mitigation::kNone;
  int max_parallel = 4;
  metrics::CodeBleuWeights weights;
};

struct VariantResult {
  std::string model;
  std::string instance_id;
  spp::PType ptype = spp::PType::kIfElseSwap;
  Mitigation mitigation = Mitigation::kNone;
  bool scored = false;
  metrics::MetricsRecord metrics;
  features::FeatureVector features;
  int samples = 0;
  int extraction_failures = 0;
  std::string error;
};

/// Unperturbed pass: which instances the model solves at least once.
inline std::map<std::string, bool> solve_originals(Adapter& a,
                                                   const std::vector<ReviewInstance>& instances,
                                                   const RunOptions& opts,
                                                   std::vector<std::string>* errors = nullptr) {
  std::vector<char> ok(instances.size(), 0);
  std::vector<std::string> err(instances.size());
  parallel_for(instances.size(), opts.max_parallel, [&](std::size_t i) {
    const ReviewInstance& inst = instances[i];
    try {
      Query q{inst.id, build_prompt(inst.code, inst.comment, Mitigation::kNone), inst.code,
              inst.revision};
      const Scored s = score_samples(inst.code, inst.revision, a.query(q, opts.samples), opts.weights);
      ok[i] = s.best.exm;
    } catch (const Error& e) {
      err[i] = inst.id + ": " + e.what();
    }
  });
  std::map<std::string, bool> out;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    out[instances[i].id] = ok[i] != 0;
    if (errors && !err[i].empty()) errors->push_back(err[i]);
  }
  return out;
}

/// Scores the variants whose parent instance the model solves.
inline std::vector<VariantResult> evaluate_variants(Adapter& a,
                                                    const std::vector<ReviewInstance>& instances,
                                                    const std::vector<spp::PerturbedVariant>& variants,
                                                    const std::set<std::string>& solvable,
                                                    const RunOptions& opts) {
  if (opts.mitigation == Mitigation::kCoT && !a.instruction_tuned()) {
    throw Error(ErrorCode::kUnsupportedMitigation,
                a.model() + " is not instruction-tuned; chain-of-thought does not apply");
  }
  std::map<std::string, const ReviewInstance*> by_id;
  for (const auto& inst : instances) by_id[inst.id] = &inst;
  std::vector<const spp::PerturbedVariant*> todo;
  for (const auto& v : variants) {
    if (solvable.count(v.instance_id) && by_id.count(v.instance_id)) todo.push_back(&v);
  }
  std::vector<VariantResult> out(todo.size());
  parallel_for(todo.size(), opts.max_parallel, [&](std::size_t i) {
    const spp::PerturbedVariant& v = *todo[i];
    VariantResult& r = out[i];
    r.model = a.model();
    r.instance_id = v.instance_id;
    r.ptype = v.ptype;
    r.mitigation = opts.mitigation;
    try {
      r.features = features::extract(v, *by_id.at(v.instance_id));
      Query q{v.instance_id + "/" + spp::ptype_id(v.ptype),
              build_prompt(v.code, v.comment, opts.mitigation, a.instruction_tuned()), v.code,
              v.revision};
      const Scored s = score_samples(v.code, v.revision, a.query(q, opts.samples), opts.weights);
      r.metrics = s.best;
      r.samples = s.samples;
      r.extraction_failures = s.extraction_failures;
      r.scored = true;
    } catch (const Error& e) {
      r.error = e.what();
    }
  });
  return out;
}

// Aggregates.

struct Aggregate {
  std::string model;
  spp::PType ptype = spp::PType::kIfElseSwap;
  std::size_t n = 0;
  double exm_rate = 0;
  double delta_exm = 0;
  double delta_em = 0;
  std::optional<double> mean_ree;  // over EM-true cases
  double mean_codebleu = 0;
};

/// Per-(model, ptype) aggregates over scored results, optionally restricted
/// to a set of instances.
inline std::vector<Aggregate> aggregate(const std::vector<VariantResult>& results,
                                        const std::set<std::string>* only = nullptr) {
  struct Acc {
    std::size_t n = 0, exm = 0, em = 0, ree_n = 0;
    double ree = 0, cb = 0;
  };
  std::map<std::pair<std::string, spp::PType>, Acc> acc;
  for (const VariantResult& r : results) {
    if (!r.scored || (only && !only->count(r.instance_id))) continue;
    Acc& a = acc[{r.model, r.ptype}];
    ++a.n;
    a.exm += r.metrics.exm;
    a.em += r.metrics.em;
    if (r.metrics.ree) {
      ++a.ree_n;
      a.ree += *r.metrics.ree;
    }
    a.cb += r.metrics.codebleu;
  }
  std::vector<Aggregate> out;
  for (const auto& [key, a] : acc) {
    Aggregate g;
    g.model = key.first;
    g.ptype = key.second;
    g.n = a.n;
    const double n = static_cast<double>(a.n);
    g.exm_rate = static_cast<double>(a.exm) / n;
    g.delta_exm = 100.0 * (1.0 - g.exm_rate);
    g.delta_em = 100.0 * (1.0 - static_cast<double>(a.em) / n);
    if (a.ree_n) g.mean_ree = a.ree / static_cast<double>(a.ree_n);
    g.mean_codebleu = a.cb / n;
    out.push_back(g);
  }
  return out;
}

struct ModelSummary {
  std::string model;
  std::size_t solvable = 0;
  std::size_t intersection = 0;
  std::optional<double> max_delta_exm_solvable;
  std::optional<double> max_delta_exm_intersection;
};

inline std::optional<double> max_drop(const std::vector<Aggregate>& aggs, const std::string& model) {
  std::vector<double> rates;
  for (const auto& g : aggs) {
    if (g.model == model) rates.push_back(g.exm_rate);
  }
  if (rates.empty()) return std::nullopt;
  return stats::max_delta_exm(rates);
}

inline std::vector<ModelSummary> summarize(const std::vector<VariantResult>& results,
                                           const SubsetIndex& subsets) {
  const auto all = aggregate(results);
  const auto common = aggregate(results, &subsets.intersection);
  std::vector<ModelSummary> out;
  for (const auto& [model, solved] : subsets.solvable) {
    out.push_back({model, solved.size(), subsets.intersection.size(), max_drop(all, model),
                   max_drop(common, model)});
  }
  return out;
}

inline std::vector<stats::ObservationRow> observations(const std::vector<VariantResult>& results) {
  std::vector<stats::ObservationRow> out;
  for (const VariantResult& r : results) {
    if (!r.scored) continue;
    out.push_back({r.instance_id, r.model, spp::ptype_id(r.ptype), r.metrics.exm ? 1 : 0,
                   r.features.pos, r.features.distance,
                   static_cast<double>(r.features.tok_edit_in),
                   static_cast<double>(r.features.tok_edit_task),
                   static_cast<double>(r.features.input_length)});
  }
  return out;
}

// CSV output. Column orders are fixed.

inline std::string opt_num(const std::optional<double>& v) { return v ? csv::num(*v) : ""; }

inline void write_results(std::ostream& os, const std::vector<VariantResult>& rs) {
  csv::write_row(os, {"model", "instance_id", "ptype", "mitigation", "scored", "exm", "em", "ree",
                      "codebleu", "codebleu_degraded", "samples", "extraction_failures", "pos",
                      "distance", "tok_edit_in", "tok_edit_task", "input_length", "error"});
  for (const VariantResult& r : rs) {
    csv::write_row(os, {r.model, r.instance_id, spp::ptype_id(r.ptype),
                        std::string(mitigation_name(r.mitigation)), r.scored ? "1" : "0",
                        r.metrics.exm ? "1" : "0", r.metrics.em ? "1" : "0", opt_num(r.metrics.ree),
                        csv::num(r.metrics.codebleu), r.metrics.codebleu_degraded ? "1" : "0",
                        std::to_string(r.samples), std::to_string(r.extraction_failures),
                        std::string(features::position_name(r.features.pos)),
                        csv::num(r.features.distance), std::to_string(r.features.tok_edit_in),
                        std::to_string(r.features.tok_edit_task),
                        std::to_string(r.features.input_length), r.error});
  }
}

inline void write_aggregates(std::ostream& os, const std::vector<Aggregate>& aggs) {
  csv::write_row(os, {"model", "ptype", "n", "delta_exm", "delta_em", "ree", "codebleu"});
  for (const Aggregate& g : aggs) {
    csv::write_row(os, {g.model, spp::ptype_id(g.ptype), std::to_string(g.n), csv::num(g.delta_exm, 1),
                        csv::num(g.delta_em, 1), opt_num(g.mean_ree), csv::num(g.mean_codebleu)});
  }
}

inline void write_summary(std::ostream& os, const std::vector<ModelSummary>& ms) {
  csv::write_row(os, {"model", "solvable", "intersection", "max_delta_exm_solvable",
                      "max_delta_exm_intersection"});
  for (const ModelSummary& m : ms) {
    csv::write_row(os, {m.model, std::to_string(m.solvable), std::to_string(m.intersection),
                        m.max_delta_exm_solvable ? csv::num(*m.max_delta_exm_solvable, 1) : "",
                        m.max_delta_exm_intersection ? csv::num(*m.max_delta_exm_intersection, 1)
                                                     : ""});
  }
}

inline void write_subsets(std::ostream& os, const SubsetIndex& s) {
  csv::write_row(os, {"model", "instance_id", "in_intersection"});
  for (const auto& [model, ids] : s.solvable) {
    for (const auto& id : ids) {
      csv::write_row(os, {model, id, s.intersection.count(id) ? "1" : "0"});
    }
  }
}

}  // namespace acrc::harness
