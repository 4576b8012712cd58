#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "acrc/cli/run.hpp"

namespace acrc::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result acrc(std::vector<std::string> args) {
  std::stringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh(const std::string& name) {
  const fs::path p = fs::path(testing::TempDir()) / ("acrc_cli_" + name);
  fs::remove_all(p);
  return p;
}

TEST(Cli, PerturbIsDeterministicAndIdempotent) {
  const fs::path a = fresh("perturb_a");
  const fs::path b = fresh("perturb_b");
  const std::string before = slurp(ACRC_CORPUS);
  for (const fs::path& dir : {a, b, a}) {
    const Result r = acrc({"perturb", "--dataset", ACRC_CORPUS, "--out", dir.string(), "--seed",
                           "42", "--ptypes", "p2,p4"});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  EXPECT_EQ(slurp(a / "variants.jsonl"), slurp(b / "variants.jsonl"));
  EXPECT_EQ(slurp(a / "exclusions.csv"), slurp(b / "exclusions.csv"));
  EXPECT_NE(slurp(a / "exclusions.csv").find("fix-equals-perturbation"), std::string::npos);
  EXPECT_EQ(slurp(ACRC_CORPUS), before);
  std::ifstream in(a / "variants.jsonl");
  for (const auto& v : harness::read_variants(in)) {
    EXPECT_TRUE(v.ptype == spp::PType::kDeadException || v.ptype == spp::PType::kTryCatchWrap);
  }
}

TEST(Cli, EvaluateEchoGroundTruthIsAllPerfect) {
  const fs::path dir = fresh("evaluate");
  const Result r = acrc({"evaluate", "--dataset", ACRC_CORPUS, "--out", dir.string(), "--adapter",
                         "mock:echo-gt", "--samples", "2", "--format", "md"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::stringstream agg(slurp(dir / "aggregates.csv"));
  const csv::Table t = csv::read_table(agg);
  ASSERT_EQ(t.rows.size(), 9u);
  for (const auto& row : t.rows) {
    EXPECT_EQ(row[t.column("delta_exm")], "0.0");
    EXPECT_EQ(row[t.column("delta_em")], "0.0");
    EXPECT_EQ(csv::to_double(row[t.column("ree")]), 0.0);
    EXPECT_EQ(csv::to_double(row[t.column("codebleu")]), 1.0);
  }
  EXPECT_TRUE(fs::exists(dir / "evaluation.md"));
  EXPECT_TRUE(fs::exists(dir / "observations.csv"));
  EXPECT_NE(slurp(dir / "summary.csv").find("mock-echo-gt,57,57,0.0,0.0"), std::string::npos);
}

TEST(Cli, EvaluateRejectsCotForBaseModel) {
  const Result r = acrc({"evaluate", "--dataset", ACRC_CORPUS, "--out", fresh("cot").string(),
                         "--adapter", "mock:echo-gt,base", "--mitigation", "cot", "--samples", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("UnsupportedMitigation"), std::string::npos);
}

TEST(Cli, RegressRecoversSyntheticFixture) {
  const fs::path dir = fresh("regress");
  ASSERT_EQ(acrc({"simulate", "--out", dir.string(), "--seed", "11"}).code, 0);
  const Result r = acrc({"regress", "--observations", (dir / "observations.csv").string(), "--out",
                         dir.string(), "--format", "md"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::stringstream reg(slurp(dir / "regression.csv"));
  const csv::Table t = csv::read_table(reg);
  const stats::SyntheticSpec truth;
  ASSERT_EQ(t.rows.size(), truth.beta.size());
  for (const auto& row : t.rows) {
    const double est = csv::to_double(row[t.column("estimate")]);
    const double se = csv::to_double(row[t.column("se")]);
    EXPECT_LT(std::abs(est - truth.beta.at(row[0])), 4 * se) << row[0];
  }
  EXPECT_TRUE(fs::exists(dir / "regression.md"));
  EXPECT_NE(slurp(dir / "diagnostics.csv").find("vif,distance"), std::string::npos);
  ASSERT_EQ(acrc({"report", "--out", dir.string()}).code, 0);
  EXPECT_NE(slurp(dir / "report.md").find("## Regression coefficients"), std::string::npos);
}

TEST(Cli, StandardizeToggleChangesScaleOnly) {
  const fs::path dir = fresh("standardize");
  ASSERT_EQ(acrc({"simulate", "--out", dir.string(), "--seed", "4", "--n", "1500"}).code, 0);
  const std::string obs = (dir / "observations.csv").string();
  ASSERT_EQ(acrc({"regress", "--observations", obs, "--out", (dir / "on").string()}).code, 0);
  ASSERT_EQ(acrc({"regress", "--observations", obs, "--out", (dir / "off").string(),
                  "--standardize", "off"})
                .code,
            0);
  std::stringstream on(slurp(dir / "on" / "regression.csv"));
  std::stringstream off(slurp(dir / "off" / "regression.csv"));
  const auto a = csv::read_table(on);
  const auto b = csv::read_table(off);
  // Dummy-coded position effects do not depend on the continuous scaling.
  for (std::size_t i = 1; i < 4; ++i) {
    EXPECT_NEAR(csv::to_double(a.rows[i][1]), csv::to_double(b.rows[i][1]), 1e-3) << a.rows[i][0];
  }
  EXPECT_NE(a.rows[4][1], b.rows[4][1]);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(acrc({}).code, 2);
  EXPECT_EQ(acrc({"nonsense"}).code, 2);
  const Result missing = acrc({"perturb", "--out", fresh("x").string()});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("--dataset"), std::string::npos);
  EXPECT_EQ(acrc({"perturb", "--dataset", "/no/such/file.jsonl"}).code, 2);
  EXPECT_EQ(acrc({"perturb", "--dataset", ACRC_CORPUS, "--ptypes", "p0", "--out",
                  fresh("bad_ptype").string()})
                .code,
            2);
  EXPECT_EQ(acrc({"regress", "--observations", ACRC_CORPUS, "--out", fresh("bad_obs").string()}).code,
            2);
  EXPECT_EQ(acrc({"report", "--out", fresh("empty").string()}).code, 2);
  EXPECT_EQ(acrc({"--help"}).code, 0);

  const fs::path dir = fresh("partial");
  fs::create_directories(dir);
  {
    std::ofstream ds(dir / "ds.jsonl");
    ds << slurp(ACRC_CORPUS).substr(0, slurp(ACRC_CORPUS).find('\n') + 1) << "{\"id\": \"broken\"}\n";
  }
  const Result partial = acrc({"perturb", "--dataset", (dir / "ds.jsonl").string(), "--out",
                               dir.string()});
  EXPECT_EQ(partial.code, 1);
  EXPECT_NE(partial.err.find(":2: SchemaError"), std::string::npos) << partial.err;
}

TEST(Cli, FeaturesReadStoredVariants) {
  const fs::path dir = fresh("features");
  ASSERT_EQ(acrc({"perturb", "--dataset", ACRC_CORPUS, "--out", dir.string(), "--ptypes", "p6"}).code,
            0);
  const Result r = acrc({"features", "--dataset", ACRC_CORPUS, "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::stringstream f(slurp(dir / "features.csv"));
  const csv::Table t = csv::read_table(f);
  EXPECT_FALSE(t.rows.empty());
  for (const auto& row : t.rows) EXPECT_EQ(row[t.column("ptype")], "p6");
}

}  // namespace
}  // namespace acrc::cli
