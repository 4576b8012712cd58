#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "acrc/harness/adapter.hpp"
#include "acrc/harness/dataset.hpp"
#include "acrc/harness/extract.hpp"
#include "acrc/harness/generate.hpp"
#include "acrc/harness/pipeline.hpp"
#include "acrc/harness/prompt.hpp"
#include "acrc/harness/remote.hpp"

namespace acrc::harness {
namespace {

std::vector<spp::PType> all_ptypes() { return {spp::kAllPTypes.begin(), spp::kAllPTypes.end()}; }

const ReviewInstance kNullCheck{
    "null-check",
    "public String displayName(User user) { String name = user.getName(); <START> return name.trim(); <END> }",
    "name can be null here, guard it before trimming",
    "public String displayName(User user) { String name = user.getName(); if (name == null) { return \"\"; } return name.trim(); }"};

std::string line(const std::string& id, const std::string& code, const std::string& rev) {
  return nlohmann::json{{"id", id}, {"code", code}, {"comment", "c"}, {"revision", rev}}.dump();
}

Dataset corpus() { return load_dataset(ACRC_CORPUS); }

TEST(Dataset, LoadsWellFormedLines) {
  std::stringstream in;
  in << line("a", kNullCheck.code, kNullCheck.revision) << "\n"
     << line("b", "int f() { <START> return 1; <END> }", "int f() { return 2; }") << "\n\n"
     << line("c", "void g() { <START> x(); <END> }", "void g() { y(); }") << "\n";
  const Dataset d = read_dataset(in);
  EXPECT_EQ(d.instances.size(), 3u);
  EXPECT_TRUE(d.rejected.empty());
}

TEST(Dataset, RejectsBadLinesWithLineNumbers) {
  std::stringstream in;
  in << line("a", kNullCheck.code, kNullCheck.revision) << "\n"
     << R"({"id": "b", "code": "int f() { <START> return 1; <END> }", "comment": "c"})" << "\n"
     << line("a", kNullCheck.code, kNullCheck.revision) << "\n"
     << line("d", "int f() { <START> return 1; }", "int f() { return 2; }") << "\n"
     << "not json\n"
     << line("f", "int f() { <START> return 1; <END> }", "int f() { return 2; }") << "\n";
  const Dataset d = read_dataset(in);
  ASSERT_EQ(d.instances.size(), 2u);
  ASSERT_EQ(d.rejected.size(), 4u);
  EXPECT_EQ(d.rejected[0].line, 2u);
  EXPECT_NE(d.rejected[0].message.find("revision"), std::string::npos);
  EXPECT_EQ(d.rejected[1].line, 3u);
  EXPECT_EQ(d.rejected[2].line, 4u);
  EXPECT_EQ(d.rejected[2].code, ErrorCode::kMalformedTags);
  EXPECT_EQ(d.rejected[3].line, 5u);
}

TEST(Dataset, MissingFileIsIoError) {
  try {
    load_dataset("/nonexistent/corpus.jsonl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
}

TEST(Corpus, LoadsFullyAndCoversEveryPtype) {
  const Dataset d = corpus();
  EXPECT_TRUE(d.rejected.empty());
  EXPECT_GE(d.instances.size(), 50u);
  const Generated g = generate_variants(d.instances, all_ptypes(), 42);
  std::set<spp::PType> seen;
  for (const auto& v : g.variants) seen.insert(v.ptype);
  EXPECT_EQ(seen.size(), 9u);
}

// Applicability recomputed one cell at a time must add up to the batch output.
TEST(Generate, CountEqualsApplicabilityMatrix) {
  const Dataset d = corpus();
  std::size_t expected = 0;
  for (const auto& inst : d.instances) {
    for (spp::PType p : spp::kAllPTypes) expected += spp::applicable(p, inst, 42).ok;
  }
  const Generated g = generate_variants(d.instances, all_ptypes(), 42);
  EXPECT_EQ(g.variants.size(), expected);
  EXPECT_EQ(g.variants.size() + g.exclusions.size(), d.instances.size() * 9);
}

TEST(Generate, NullCheckTryCatchWrapsBothSides) {
  const Generated g = generate_variants({kNullCheck}, {spp::PType::kTryCatchWrap}, 42);
  ASSERT_EQ(g.variants.size(), 1u);
  const auto& v = g.variants[0];
  for (const std::string* side : {&v.code, &v.revision}) {
    EXPECT_NE(side->find("try {"), std::string::npos) << *side;
    EXPECT_NE(side->find("catch (Exception e)"), std::string::npos) << *side;
  }
  EXPECT_NE(v.revision.find("name == null"), std::string::npos);
}

TEST(Generate, FixEqualToWrapIsExcluded) {
  const ReviewInstance inst{"wrap", "public int readCount(Reader reader) { <START> int count = reader.read(); <END> return count; }",
                            "wrap it",
                            "public int readCount(Reader reader) { try { int count = reader.read(); return count; } catch (Exception e) { throw e; } }"};
  const Generated g = generate_variants({inst}, {spp::PType::kTryCatchWrap}, 42);
  ASSERT_EQ(g.exclusions.size(), 1u);
  EXPECT_EQ(g.exclusions[0].reason, spp::Reason::kFixEqualsPerturbation);
  std::stringstream log;
  write_exclusions(log, g.exclusions);
  EXPECT_NE(log.str().find("wrap,p4,fix-equals-perturbation"), std::string::npos);
}

TEST(Generate, DeterministicUnderSeed) {
  const Dataset d = corpus();
  std::stringstream a, b, c;
  write_variants(a, generate_variants(d.instances, all_ptypes(), 7).variants);
  write_variants(b, generate_variants(d.instances, all_ptypes(), 7).variants);
  write_variants(c, generate_variants(d.instances, all_ptypes(), 8).variants);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_NE(a.str(), c.str());
}

TEST(VariantStore, RoundTrips) {
  const auto vs = generate_variants({kNullCheck}, all_ptypes(), 42).variants;
  std::stringstream ss;
  write_variants(ss, vs);
  const auto back = read_variants(ss);
  ASSERT_EQ(back.size(), vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) {
    EXPECT_EQ(back[i].code, vs[i].code);
    EXPECT_EQ(back[i].revision, vs[i].revision);
    EXPECT_EQ(back[i].spans, vs[i].spans);
    EXPECT_EQ(back[i].seed, vs[i].seed);
    EXPECT_EQ(back[i].ptype, vs[i].ptype);
  }
  std::stringstream bad(R"({"instance_id": "x"})");
  EXPECT_THROW(read_variants(bad), Error);
}

TEST(Prompt, NoneCarriesCodeAndCommentVerbatim) {
  const std::string p = build_prompt(kNullCheck.code, kNullCheck.comment, Mitigation::kNone);
  EXPECT_NE(p.find(kNullCheck.code), std::string::npos);
  EXPECT_NE(p.find(kNullCheck.comment), std::string::npos);
  EXPECT_EQ(p.find("You are"), std::string::npos);
  EXPECT_EQ(p.find(kCotSentence), std::string::npos);
}

TEST(Prompt, CrUsesTemplate) {
  const std::string p = build_prompt(kNullCheck.code, kNullCheck.comment, Mitigation::kCR);
  const std::string expected =
      "For this part of the Java code: return name.trim();, this review comment is provided: "
      "name can be null here, guard it before trimming.";
  EXPECT_NE(p.find(expected), std::string::npos) << p;
}

TEST(Prompt, IcInsertsOneCommentAfterSpan) {
  const std::string code = inline_comment(kNullCheck.code, kNullCheck.comment);
  const TokenStream before = tokenize(kNullCheck.code);
  const TokenStream after = tokenize(code);
  ASSERT_EQ(after.size(), before.size() + 1);
  std::size_t end = 0;
  while (after[end].text != kEndTag) ++end;
  EXPECT_EQ(after[end + 1].text, "// REVIEW: " + kNullCheck.comment);
  EXPECT_EQ(after[end + 1].kind, TokenKind::kComment);
  const std::string p = build_prompt(kNullCheck.code, kNullCheck.comment, Mitigation::kIC);
  EXPECT_NE(p.find(code), std::string::npos);
}

TEST(Prompt, CotAppendsSentenceAndNeedsInstructionTuning) {
  const std::string p = build_prompt(kNullCheck.code, kNullCheck.comment, Mitigation::kCoT);
  const std::string tail = std::string(kCotSentence) + "\n";
  ASSERT_GE(p.size(), tail.size());
  EXPECT_EQ(p.substr(p.size() - tail.size()), tail);
  try {
    build_prompt(kNullCheck.code, kNullCheck.comment, Mitigation::kCoT, false);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupportedMitigation);
  }
  EXPECT_NO_THROW(build_prompt(kNullCheck.code, kNullCheck.comment, Mitigation::kCR, false));
}

TEST(Extract, HandlesFencesProseAndTags) {
  const std::string canonical = java::serialize(
      java::parse_method(kNullCheck.revision, {java::TagPolicy::kForbidden}).ast, false);
  EXPECT_EQ(extract_method("```java\n" + kNullCheck.revision + "\n```"), canonical);
  EXPECT_EQ(extract_method("Here's the fix, it's simple:\n\n" + kNullCheck.revision + "\nThat's all."),
            canonical);
  EXPECT_EQ(extract_method(kNullCheck.code), java::serialize(java::parse_method(kNullCheck.code).ast, false));
  EXPECT_FALSE(extract_method("I cannot help with that.").has_value());
  EXPECT_FALSE(extract_method("").has_value());
}

TEST(Extract, TakesFirstMethod) {
  const auto m = extract_method("int a() { return 1; }\nint b() { return 2; }\n");
  ASSERT_TRUE(m);
  EXPECT_NE(m->find("a()"), std::string::npos);
  EXPECT_EQ(m->find("b()"), std::string::npos);
}

TEST(Mock, EchoModes) {
  const Query q{"k", "prompt", kNullCheck.code, kNullCheck.revision};
  MockAdapter gt(MockMode::kEchoGt);
  const auto r = gt.query(q, 3);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_TRUE(metrics::exact_match(*extract_method(r[0]), kNullCheck.revision));
  MockAdapter in(MockMode::kEchoInput);
  EXPECT_FALSE(metrics::exact_match(*extract_method(in.query(q, 1)[0]), kNullCheck.revision));
}

TEST(Mock, NoisyCandidateIsEditMatchWithHandComputedRee) {
  MockAdapter noisy(MockMode::kGtPlusNoise);
  const Query q{"k", "prompt", kNullCheck.code, kNullCheck.revision};
  const Scored s = score_samples(kNullCheck.code, kNullCheck.revision, noisy.query(q, 2));
  EXPECT_FALSE(s.best.exm);
  EXPECT_TRUE(s.best.em);
  // Reference edit: `if ( name == null ) { return "" ; }` = 11 tokens.
  // The noise adds `int acrcNoise = 0 ;` = 5 more.
  ASSERT_TRUE(s.best.ree);
  EXPECT_NEAR(*s.best.ree, 5.0 / 11.0, 1e-12);
}

TEST(Mock, ScriptedAndDescriptors) {
  MockAdapter scripted(MockMode::kScripted, true, {{"k", {"a", "b", "c"}}});
  EXPECT_EQ(scripted.query({"k", "", "", ""}, 2), (std::vector<std::string>{"a", "b"}));
  EXPECT_THROW(scripted.query({"other", "", "", ""}, 2), Error);
  EXPECT_TRUE(make_mock("mock:echo-gt")->instruction_tuned());
  EXPECT_FALSE(make_mock("mock:echo-gt,base")->instruction_tuned());
  EXPECT_THROW(make_mock("mock:nope"), Error);
}

struct FlakyTransport {
  int failures;
  int calls = 0;
  std::string last_body;
  std::string last_bearer;
  HttpResponse operator()(const HttpRequest& req) {
    ++calls;
    last_body = req.body;
    last_bearer = req.bearer;
    if (calls <= failures) {
      if (calls % 2) throw Error(ErrorCode::kTransport, "connection reset");
      return {503, "busy"};
    }
    return {200, R"({"choices":[{"message":{"content":"int f() { return 1; }"}},{"message":{"content":"x"}}]})"};
  }
};

TEST(Remote, RetriesWithinBudget) {
  auto flaky = std::make_shared<FlakyTransport>(FlakyTransport{2, 0, {}, {}});
  AdapterConfig opts;
  opts.retries = 3;
  opts.temperature = 0.2;
  RemoteAdapter a({"http://localhost", "/v1/chat/completions", "m", true}, opts,
                  [flaky](const HttpRequest& r) { return (*flaky)(r); }, "secret",
                  std::chrono::milliseconds(0));
  const auto out = a.query({"k", "the prompt", "", ""}, 2);
  EXPECT_EQ(out.size(), 2u);
  EXPECT_EQ(flaky->calls, 3);
  EXPECT_EQ(flaky->last_bearer, "secret");
  const auto body = nlohmann::json::parse(flaky->last_body);
  EXPECT_EQ(body["n"], 2);
  EXPECT_EQ(body["temperature"], 0.2);
  EXPECT_EQ(body["messages"][0]["content"], "the prompt");
  EXPECT_EQ(body["messages"].size(), 1u);
}

TEST(Remote, SurfacesTransportAfterBudget) {
  auto flaky = std::make_shared<FlakyTransport>(FlakyTransport{4, 0, {}, {}});
  AdapterConfig opts;
  opts.retries = 3;
  RemoteAdapter a({"http://localhost", "/p", "m", true}, opts,
                  [flaky](const HttpRequest& r) { return (*flaky)(r); }, "k",
                  std::chrono::milliseconds(0));
  try {
    a.query({"k", "p", "", ""}, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTransport);
  }
  EXPECT_EQ(flaky->calls, 4);
}

TEST(Remote, ClientErrorsAndEmptyBodies) {
  int calls = 0;
  RemoteAdapter bad({"http://localhost", "/p", "m", true}, {},
                    [&](const HttpRequest&) { ++calls; return HttpResponse{401, "denied"}; }, "k",
                    std::chrono::milliseconds(0));
  EXPECT_THROW(bad.query({"k", "p", "", ""}, 1), Error);
  EXPECT_EQ(calls, 1);
  try {
    RemoteAdapter::parse_choices(R"({"choices":[]})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyResponse);
  }
}

TEST(Remote, KeyComesFromEnvironmentOnly) {
  const std::string path = testing::TempDir() + "remote_cfg.json";
  {
    std::ofstream(path) << R"({"endpoint": "http://localhost:1", "model": "m", "api_key": "oops"})";
  }
  EXPECT_THROW(read_remote_config(path), Error);
  {
    std::ofstream(path) << R"({"endpoint": "http://localhost:1", "model": "m", "instruction_tuned": false})";
  }
  const RemoteConfig c = read_remote_config(path);
  EXPECT_FALSE(c.instruction_tuned);
  unsetenv(kApiKeyVariable);
  AdapterConfig opts;
  opts.endpoint = "remote:" + path;
  EXPECT_THROW(make_adapter(opts), Error);
  setenv(kApiKeyVariable, "from-env", 1);
  const auto a = make_adapter(opts);
  EXPECT_EQ(a->model(), "m");
  unsetenv(kApiKeyVariable);
}

TEST(Subsets, Examples) {
  const auto s = compute_subsets({{"all", {{"a", true}, {"b", true}}}, {"none", {{"a", false}, {"b", false}}}});
  EXPECT_EQ(s.solvable.at("all").size(), 2u);
  EXPECT_TRUE(s.intersection.empty());
  const auto t = compute_subsets({{"x", {{"a", true}, {"b", false}}}, {"y", {{"a", true}, {"b", false}}}});
  EXPECT_EQ(t.intersection, t.solvable.at("x"));
  for (const auto& [m, ids] : t.solvable) {
    EXPECT_TRUE(std::includes(ids.begin(), ids.end(), t.intersection.begin(), t.intersection.end()));
  }
}

struct PipelineRun {
  SubsetIndex subsets;
  std::vector<VariantResult> results;
};

PipelineRun run_pipeline(std::vector<std::unique_ptr<Adapter>>& adapters, const std::vector<ReviewInstance>& insts,
                 const std::vector<spp::PerturbedVariant>& vs, RunOptions opts) {
  std::map<std::string, std::map<std::string, bool>> solved;
  for (auto& a : adapters) solved[a->model()] = solve_originals(*a, insts, opts);
  PipelineRun r;
  r.subsets = compute_subsets(solved);
  for (auto& a : adapters) {
    auto part = evaluate_variants(*a, insts, vs, r.subsets.solvable.at(a->model()), opts);
    r.results.insert(r.results.end(), part.begin(), part.end());
  }
  return r;
}

TEST(Pipeline, EchoGroundTruthIsPerfect) {
  const Dataset d = corpus();
  const auto vs = generate_variants(d.instances, all_ptypes(), 42).variants;
  std::vector<std::unique_ptr<Adapter>> as;
  as.push_back(make_mock("mock:echo-gt"));
  RunOptions opts;
  opts.samples = 2;
  const PipelineRun r = run_pipeline(as, d.instances, vs, opts);
  EXPECT_EQ(r.subsets.solvable.at("mock-echo-gt").size(), d.instances.size());
  ASSERT_EQ(r.results.size(), vs.size());
  for (const auto& g : aggregate(r.results)) {
    EXPECT_EQ(g.delta_exm, 0.0);
    EXPECT_EQ(g.delta_em, 0.0);
    ASSERT_TRUE(g.mean_ree);
    EXPECT_EQ(*g.mean_ree, 0.0);
    EXPECT_NEAR(g.mean_codebleu, 1.0, 1e-12);
  }
}

TEST(Pipeline, EchoInputSolvesNothingAndScoresNothing) {
  const Dataset d = corpus();
  const auto vs = generate_variants(d.instances, all_ptypes(), 42).variants;
  std::vector<std::unique_ptr<Adapter>> as;
  as.push_back(make_mock("mock:echo-input"));
  const PipelineRun r = run_pipeline(as, d.instances, vs, {1, Mitigation::kNone, 2, {}});
  EXPECT_TRUE(r.subsets.solvable.at("mock-echo-input").empty());
  EXPECT_TRUE(r.results.empty());
  // Scored directly, the echoed input never matches a differing reference.
  MockAdapter echo(MockMode::kEchoInput);
  const auto all = evaluate_variants(echo, d.instances, vs, [&] {
    std::set<std::string> ids;
    for (const auto& i : d.instances) ids.insert(i.id);
    return ids;
  }(), {1, Mitigation::kNone, 2, {}});
  for (const auto& res : all) {
    ASSERT_TRUE(res.scored) << res.error;
    const auto v = std::find_if(vs.begin(), vs.end(), [&](const auto& x) {
      return x.instance_id == res.instance_id && x.ptype == res.ptype;
    });
    const bool same = metrics::exact_match(join_tokens(strip_tags(tokenize(v->code))), v->revision);
    EXPECT_EQ(res.metrics.exm, same);
  }
}

TEST(Pipeline, RestrictionInvariantAndAggregateConsistency) {
  const Dataset d = corpus();
  const auto vs = generate_variants(d.instances, all_ptypes(), 42).variants;
  std::map<std::string, std::vector<std::string>> script;
  std::size_t i = 0;
  for (const auto& inst : d.instances) {
    // Solves every other instance.
    script[inst.id] = {i++ % 2 ? std::string("nothing") : inst.revision};
  }
  for (const auto& v : vs) script[v.instance_id + "/" + spp::ptype_id(v.ptype)] = {v.revision};
  std::vector<std::unique_ptr<Adapter>> as;
  as.push_back(std::make_unique<MockAdapter>(MockMode::kScripted, true, script));
  as.push_back(make_mock("mock:gt-plus-noise"));
  const PipelineRun r = run_pipeline(as, d.instances, vs, {1, Mitigation::kNone, 3, {}});
  for (const auto& res : r.results) {
    EXPECT_TRUE(r.subsets.solvable.at(res.model).count(res.instance_id)) << res.instance_id;
  }
  EXPECT_EQ(r.subsets.intersection.size(), 0u);  // the noisy mock never solves exactly
  const auto aggs = aggregate(r.results);
  for (const auto& m : summarize(r.results, r.subsets)) {
    if (!m.max_delta_exm_solvable) continue;
    double worst = 0;
    for (const auto& g : aggs) {
      if (g.model == m.model) worst = std::max(worst, g.delta_exm);
    }
    EXPECT_DOUBLE_EQ(*m.max_delta_exm_solvable, worst);
  }
}

TEST(Pipeline, CotRejectedForBaseModels) {
  const auto vs = generate_variants({kNullCheck}, all_ptypes(), 42).variants;
  auto base = make_mock("mock:echo-gt,base");
  try {
    evaluate_variants(*base, {kNullCheck}, vs, {kNullCheck.id}, {1, Mitigation::kCoT, 1, {}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupportedMitigation);
  }
}

TEST(Pipeline, DeterministicOutputs) {
  const Dataset d = corpus();
  auto once = [&] {
    const auto vs = generate_variants(d.instances, all_ptypes(), 42).variants;
    std::vector<std::unique_ptr<Adapter>> as;
    as.push_back(make_mock("mock:gt-plus-noise"));
    as.push_back(make_mock("mock:echo-gt"));
    const PipelineRun r = run_pipeline(as, d.instances, vs, {2, Mitigation::kIC, 4, {}});
    std::stringstream ss;
    write_results(ss, r.results);
    write_aggregates(ss, aggregate(r.results));
    write_summary(ss, summarize(r.results, r.subsets));
    write_subsets(ss, r.subsets);
    return ss.str();
  };
  EXPECT_EQ(once(), once());
}

}  // namespace
}  // namespace acrc::harness
