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

#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "acrc/csv.hpp"
#include "acrc/error.hpp"
#include "acrc/features.hpp"
#include "acrc/harness/dataset.hpp"
#include "acrc/harness/generate.hpp"
#include "acrc/harness/pipeline.hpp"
#include "acrc/harness/remote.hpp"
#include "acrc/spp/naming.hpp"
#include "acrc/stats/observations.hpp"
#include "acrc/stats/synthetic.hpp"

namespace acrc::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1;
inline constexpr int kExitFatal = 2;

struct RunConfig {
  std::string command;
  std::string dataset;
  std::string out = "out";
  std::string variants;
  std::string observations;
  std::uint64_t seed = spp::kDefaultSeed;
  std::string ptypes = "p1,p2,p3,p4,p5,p6,p7,p8,p9";
  std::string mitigation = "none";
  std::vector<std::string> adapters;
  double temperature = 0.2;
  int samples = 10;
  int max_parallel = 4;
  int retries = 3;
  int timeout = 60;
  std::string standardize = "on";
  std::string format = "csv";
  std::size_t simulate_n = 5000;
};

namespace detail {

inline std::vector<spp::PType> parse_ptypes(const std::string& list) {
  std::vector<spp::PType> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) continue;
    const auto p = spp::parse_ptype(item);
    if (!p) throw Error(ErrorCode::kUsage, "unknown perturbation type '" + item + "'");
    if (std::find(out.begin(), out.end(), *p) == out.end()) out.push_back(*p);
  }
  if (out.empty()) throw Error(ErrorCode::kUsage, "empty --ptypes");
  return out;
}

inline std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::kIoError, "cannot write '" + p.string() + "'");
  return os;
}

inline std::ifstream open_in(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw Error(ErrorCode::kIoError, "cannot read '" + p.string() + "'");
  return is;
}

inline harness::Dataset load(const RunConfig& c, std::ostream& err) {
  if (c.dataset.empty()) throw Error(ErrorCode::kUsage, "--dataset is required");
  harness::Dataset d = harness::load_dataset(c.dataset);
  for (const auto& r : d.rejected) {
    err << c.dataset << ":" << r.line << ": " << error_code_name(r.code) << ": " << r.message
        << "\n";
  }
  return d;
}

inline std::vector<spp::PerturbedVariant> variants_for(const RunConfig& c,
                                                       const harness::Dataset& d) {
  fs::path stored = c.variants;
  if (stored.empty() && fs::exists(fs::path(c.out) / "variants.jsonl")) {
    stored = fs::path(c.out) / "variants.jsonl";
  }
  if (!stored.empty()) {
    std::ifstream in = open_in(stored);
    return harness::read_variants(in);
  }
  return harness::generate_variants(d.instances, parse_ptypes(c.ptypes), c.seed).variants;
}

// Markdown table from CSV rows.
inline void markdown_table(std::ostream& os, const csv::Row& header,
                           const std::vector<csv::Row>& rows) {
  os << "|";
  for (const auto& h : header) os << " " << h << " |";
  os << "\n|";
  for (std::size_t i = 0; i < header.size(); ++i) os << " --- |";
  os << "\n";
  for (const auto& r : rows) {
    os << "|";
    for (const auto& cell : r) os << " " << cell << " |";
    os << "\n";
  }
}

inline void csv_as_markdown(std::ostream& os, const std::string& csv_text) {
  std::stringstream in(csv_text);
  const csv::Table t = csv::read_table(in);
  markdown_table(os, t.header, t.rows);
}

}  // namespace detail

// Commands. Each returns an exit code; fatal problems throw.

inline int cmd_perturb(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const harness::Dataset d = detail::load(c, err);
  const auto g = harness::generate_variants(d.instances, detail::parse_ptypes(c.ptypes), c.seed);
  {
    auto os = detail::open_out(fs::path(c.out) / "variants.jsonl");
    harness::write_variants(os, g.variants);
  }
  {
    auto os = detail::open_out(fs::path(c.out) / "exclusions.csv");
    harness::write_exclusions(os, g.exclusions);
  }
  out << "instances " << d.instances.size() << ", rejected " << d.rejected.size()
      << ", variants " << g.variants.size() << ", exclusions " << g.exclusions.size() << "\n";
  return d.rejected.empty() ? kExitOk : kExitPartial;
}

inline int cmd_features(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const harness::Dataset d = detail::load(c, err);
  const auto vs = detail::variants_for(c, d);
  std::map<std::string, const ReviewInstance*> by_id;
  for (const auto& i : d.instances) by_id[i.id] = &i;
  auto os = detail::open_out(fs::path(c.out) / "features.csv");
  csv::write_row(os, {"instance_id", "ptype", "pos", "distance", "tok_edit_in", "tok_edit_task",
                      "input_length"});
  int failures = 0;
  for (const auto& v : vs) {
    auto it = by_id.find(v.instance_id);
    try {
      if (it == by_id.end()) throw Error(ErrorCode::kInvalidInput, "unknown instance");
      const auto f = features::extract(v, *it->second);
      csv::write_row(os, {v.instance_id, spp::ptype_id(v.ptype),
                          std::string(features::position_name(f.pos)), csv::num(f.distance),
                          std::to_string(f.tok_edit_in), std::to_string(f.tok_edit_task),
                          std::to_string(f.input_length)});
    } catch (const Error& e) {
      ++failures;
      err << v.instance_id << "/" << spp::ptype_id(v.ptype) << ": " << e.what() << "\n";
    }
  }
  out << "features for " << vs.size() - static_cast<std::size_t>(failures) << " variants\n";
  return d.rejected.empty() && failures == 0 ? kExitOk : kExitPartial;
}

inline int cmd_evaluate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const harness::Dataset d = detail::load(c, err);
  const auto vs = detail::variants_for(c, d);
  const auto mitigation = harness::parse_mitigation(c.mitigation);
  if (!mitigation) throw Error(ErrorCode::kUsage, "unknown --mitigation '" + c.mitigation + "'");

  harness::RunOptions opts;
  opts.samples = c.samples;
  opts.mitigation = *mitigation;
  opts.max_parallel = c.max_parallel;

  std::vector<std::unique_ptr<harness::Adapter>> adapters;
  const std::vector<std::string> specs =
      c.adapters.empty() ? std::vector<std::string>{"mock:echo-gt"} : c.adapters;
  for (const auto& spec : specs) {
    harness::AdapterConfig ac;
    ac.endpoint = spec;
    ac.temperature = c.temperature;
    ac.samples = c.samples;
    ac.mitigation = *mitigation;
    ac.timeout_seconds = c.timeout;
    ac.max_parallel = c.max_parallel;
    ac.retries = c.retries;
    ac.validate();
    adapters.push_back(harness::make_adapter(ac));
  }

  std::map<std::string, std::map<std::string, bool>> solved;
  std::vector<std::string> errors;
  for (auto& a : adapters) {
    if (solved.count(a->model())) throw Error(ErrorCode::kUsage, "duplicate model " + a->model());
    solved[a->model()] = harness::solve_originals(*a, d.instances, opts, &errors);
  }
  const harness::SubsetIndex subsets = harness::compute_subsets(solved);
  std::vector<harness::VariantResult> results;
  for (auto& a : adapters) {
    auto part = harness::evaluate_variants(*a, d.instances, vs, subsets.solvable.at(a->model()), opts);
    results.insert(results.end(), part.begin(), part.end());
  }
  for (const auto& r : results) {
    if (!r.scored) errors.push_back(r.instance_id + "/" + spp::ptype_id(r.ptype) + ": " + r.error);
  }
  const auto aggs = harness::aggregate(results);
  const auto summary = harness::summarize(results, subsets);

  const fs::path dir(c.out);
  std::stringstream agg_csv, sum_csv;
  harness::write_aggregates(agg_csv, aggs);
  harness::write_summary(sum_csv, summary);
  {
    auto os = detail::open_out(dir / "metrics.csv");
    harness::write_results(os, results);
  }
  detail::open_out(dir / "aggregates.csv") << agg_csv.str();
  detail::open_out(dir / "summary.csv") << sum_csv.str();
  {
    auto os = detail::open_out(dir / "subsets.csv");
    harness::write_subsets(os, subsets);
  }
  {
    auto os = detail::open_out(dir / "observations.csv");
    stats::write_observations(os, harness::observations(results));
  }
  if (c.format == "md") {
    auto os = detail::open_out(dir / "evaluation.md");
    os << "# Consistency per model\n\n";
    detail::csv_as_markdown(os, sum_csv.str());
    os << "\n# Per-perturbation results\n\n";
    detail::csv_as_markdown(os, agg_csv.str());
  }
  for (const auto& e : errors) err << e << "\n";
  out << "models " << adapters.size() << ", intersection " << subsets.intersection.size()
      << ", scored variants " << results.size() - std::count_if(results.begin(), results.end(),
                                                                [](const auto& r) { return !r.scored; })
      << "\n";
  return d.rejected.empty() && errors.empty() ? kExitOk : kExitPartial;
}

inline void write_regression(std::ostream& os, const stats::RegressionFit& fit) {
  csv::write_row(os, {"predictor", "estimate", "se", "z", "p", "odds_ratio", "ci_low", "ci_high"});
  for (const auto& f : fit.fixed) {
    csv::write_row(os, {f.name, csv::num(f.estimate), csv::num(f.se), csv::num(f.z),
                        csv::num(f.p, 8), csv::num(f.odds_ratio), csv::num(f.ci_low),
                        csv::num(f.ci_high)});
  }
}

inline void write_fit_summary(std::ostream& os, const stats::RegressionFit& fit,
                              const std::vector<std::string>& dropped) {
  csv::write_row(os, {"quantity", "value"});
  csv::write_row(os, {"n", std::to_string(fit.n)});
  for (const auto& c : fit.components) {
    csv::write_row(os, {"variance[" + c.name + "]", csv::num(c.variance())});
  }
  csv::write_row(os, {"marginal_r2", csv::num(fit.marginal_r2)});
  csv::write_row(os, {"conditional_r2", csv::num(fit.conditional_r2)});
  csv::write_row(os, {"laplace_loglik", csv::num(fit.laplace_loglik)});
  csv::write_row(os, {"converged", fit.converged ? "1" : "0"});
  csv::write_row(os, {"separation", fit.separation ? "1" : "0"});
  csv::write_row(os, {"outer_cycles", std::to_string(fit.outer_cycles)});
  for (const auto& d : dropped) csv::write_row(os, {"dropped", d});
}

inline void write_diagnostics(std::ostream& os, const stats::Diagnostics& d) {
  csv::write_row(os, {"kind", "a", "b", "value", "flagged"});
  for (const auto& e : d.correlations) {
    csv::write_row(os, {"spearman", e.a, e.b, e.rho ? csv::num(*e.rho) : "", e.flagged ? "1" : "0"});
  }
  for (const auto& [name, v] : d.vifs) {
    csv::write_row(os, {"vif", name, "", v.infinite ? "inf" : csv::num(v.value),
                        stats::vif_flag(v) ? "1" : "0"});
  }
}

inline int cmd_regress(const RunConfig& c, std::ostream& out, std::ostream&) {
  if (c.observations.empty()) throw Error(ErrorCode::kUsage, "--observations is required");
  if (c.standardize != "on" && c.standardize != "off") {
    throw Error(ErrorCode::kUsage, "--standardize must be on or off");
  }
  std::ifstream in = detail::open_in(c.observations);
  const auto rows = stats::read_observations(in);
  const stats::Design design = stats::build_design(rows, c.standardize == "on");
  const stats::RegressionFit fit =
      stats::fit_glmm(design.x, design.y, design.names, design.factors);
  const stats::Diagnostics diag = stats::diagnose(design);

  std::stringstream reg, summ, dia;
  write_regression(reg, fit);
  write_fit_summary(summ, fit, design.dropped);
  write_diagnostics(dia, diag);
  const fs::path dir(c.out);
  detail::open_out(dir / "regression.csv") << reg.str();
  detail::open_out(dir / "regression_fit.csv") << summ.str();
  detail::open_out(dir / "diagnostics.csv") << dia.str();
  if (c.format == "md") {
    auto os = detail::open_out(dir / "regression.md");
    os << "# Mixed-effects logistic regression\n\n";
    detail::csv_as_markdown(os, reg.str());
    os << "\n";
    detail::csv_as_markdown(os, summ.str());
    os << "\n# Diagnostics\n\n";
    detail::csv_as_markdown(os, dia.str());
  }
  out << "fitted " << fit.fixed.size() << " fixed effects on " << fit.n << " observations";
  out << (fit.converged ? "" : " (not converged)") << (fit.separation ? " (separation)" : "") << "\n";
  return fit.converged ? kExitOk : kExitPartial;
}

inline int cmd_simulate(const RunConfig& c, std::ostream& out, std::ostream&) {
  stats::SyntheticSpec spec;
  spec.n = c.simulate_n;
  const auto data = stats::simulate(spec, c.seed);
  auto os = detail::open_out(fs::path(c.out) / "observations.csv");
  stats::write_observations(os, data.rows);
  out << "simulated " << data.rows.size() << " observations\n";
  return kExitOk;
}

inline int cmd_report(const RunConfig& c, std::ostream& out, std::ostream&) {
  const fs::path dir(c.out);
  const std::vector<std::pair<std::string, std::string>> sections = {
      {"summary.csv", "Consistency per model"},
      {"aggregates.csv", "Per-perturbation results"},
      {"regression.csv", "Regression coefficients"},
      {"regression_fit.csv", "Regression fit"},
      {"diagnostics.csv", "Collinearity diagnostics"},
      {"exclusions.csv", "Perturbation exclusions"},
      {"features.csv", "Variant features"},
  };
  std::stringstream doc;
  doc << "# acrc report\n";
  int found = 0;
  for (const auto& [file, title] : sections) {
    if (!fs::exists(dir / file)) continue;
    ++found;
    std::ifstream in = detail::open_in(dir / file);
    std::stringstream text;
    text << in.rdbuf();
    doc << "\n## " << title << "\n\n";
    detail::csv_as_markdown(doc, text.str());
  }
  if (found == 0) throw Error(ErrorCode::kIoError, "no result files in '" + dir.string() + "'");
  detail::open_out(dir / "report.md") << doc.str();
  out << "report with " << found << " sections\n";
  return kExitOk;
}

/// Entry point shared by the binary and the tests.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robustness evaluation for automated code revision", "acrc"};
  app.require_subcommand(1);
  RunConfig c;

  auto common = [&](CLI::App* s) {
    s->add_option("--out", c.out, "Output directory")->capture_default_str();
    s->add_option("--seed", c.seed, "Random seed")->capture_default_str();
    s->add_option("--format", c.format, "Report format")
        ->check(CLI::IsMember({"csv", "md"}))
        ->capture_default_str();
  };
  auto data = [&](CLI::App* s) {
    s->add_option("--dataset", c.dataset, "Dataset JSONL")->required();
    s->add_option("--ptypes", c.ptypes, "Comma-separated perturbation types")->capture_default_str();
  };

  CLI::App* perturb = app.add_subcommand("perturb", "Generate perturbed variants");
  common(perturb);
  data(perturb);

  CLI::App* feats = app.add_subcommand("features", "Extract variant features");
  common(feats);
  data(feats);
  feats->add_option("--variants", c.variants, "Variants JSONL (default: <out>/variants.jsonl, else generated)");

  CLI::App* eval = app.add_subcommand("evaluate", "Query models and score variants");
  common(eval);
  data(eval);
  eval->add_option("--variants", c.variants, "Variants JSONL (default: <out>/variants.jsonl, else generated)");
  eval->add_option("--adapter", c.adapters,
                   "mock:{echo-gt|echo-input|gt-plus-noise|scripted=FILE}[,base] or remote:CONFIG; repeatable");
  eval->add_option("--mitigation", c.mitigation, "none|cr|ic|cot")
      ->check(CLI::IsMember({"none", "cr", "ic", "cot"}))
      ->capture_default_str();
  eval->add_option("--temperature", c.temperature, "Sampling temperature")->capture_default_str();
  eval->add_option("--samples", c.samples, "Samples per query")->capture_default_str();
  eval->add_option("--max-parallel", c.max_parallel, "Concurrent queries")->capture_default_str();
  eval->add_option("--retries", c.retries, "Retry budget per query")->capture_default_str();
  eval->add_option("--timeout", c.timeout, "Request timeout in seconds")->capture_default_str();

  CLI::App* regress = app.add_subcommand("regress", "Fit the mixed-effects regression");
  common(regress);
  regress->add_option("--observations", c.observations, "Observation CSV")->required();
  regress->add_option("--standardize", c.standardize, "z-score continuous predictors")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();

  CLI::App* sim = app.add_subcommand("simulate", "Write a synthetic observation CSV");
  common(sim);
  sim->add_option("--n", c.simulate_n, "Observations")->capture_default_str();

  CLI::App* report = app.add_subcommand("report", "Render result CSVs into report.md");
  common(report);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitFatal;
  }

  try {
    if (perturb->parsed()) return cmd_perturb(c, out, err);
    if (feats->parsed()) return cmd_features(c, out, err);
    if (eval->parsed()) return cmd_evaluate(c, out, err);
    if (regress->parsed()) return cmd_regress(c, out, err);
    if (sim->parsed()) return cmd_simulate(c, out, err);
    if (report->parsed()) return cmd_report(c, out, err);
  } catch (const Error& e) {
    err << "error: " << error_code_name(e.code()) << ": " << e.what() << "\n";
    if (e.code() == ErrorCode::kUsage) err << "\n" << app.help();
    return kExitFatal;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFatal;
  }
  return kExitFatal;
}

}  // namespace acrc::cli
