#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "acrc/error.hpp"
#include "acrc/java/dataflow.hpp"
#include "acrc/metrics/metrics.hpp"

namespace acrc::metrics {
namespace {

using Texts = std::vector<std::string>;

const char* kInput = R"(public void save(Item item) {
    <START>store.put(item.key(), item);<END>
    try {
        log.debug("saved");
    } catch (Exception e) {
        throw e;
    }
})";

const char* kReference = R"(public void save(Item item) {
    if (item != null) {
        store.put(item.key(), item);
    }
    try {
        log.debug("saved");
    } catch (Exception e) {
        throw e;
    }
})";

// Adds the null check and also drops an unrelated try-catch.
const char* kCandidateExtra = R"(public void save(Item item) {
    if (item != null) {
        store.put(item.key(), item);
    }
    log.debug("saved");
})";

TEST(ExactMatch, Basics) {
  EXPECT_TRUE(exact_match(kReference, kReference));
  EXPECT_TRUE(exact_match("int f() { return 1; }", "int f(){return 1;}"));
  EXPECT_FALSE(exact_match("int f() { return 1; }", "int f() { return 1;; }"));
}

TEST(EditMatch, ExactIsEditMatch) { EXPECT_TRUE(edit_match(kInput, kReference, kReference)); }

TEST(EditMatch, ExtraUnrelatedEditsAllowed) {
  EXPECT_TRUE(edit_match(kInput, kCandidateExtra, kReference));
  EXPECT_FALSE(exact_match(kCandidateExtra, kReference));
}

TEST(EditMatch, MissingRequiredDeletion) {
  const char* input = "void f() { <START>a(); b = 1;<END> c(); }";
  const char* reference = "void f() { a(); c(); }";
  EXPECT_TRUE(edit_match(input, "void f() { a(); c(); return; }", reference));
  EXPECT_FALSE(edit_match(input, "void f() { a(); b = 1; c(); return; }", reference));
}

TEST(EditMatch, MissingRequiredInsertion) {
  EXPECT_FALSE(edit_match(kInput, kInput, kReference));
}

TEST(EditMatch, RegionsNeedDistinctPartners) {
  // Two identical required inserts cannot share one model insert.
  EXPECT_TRUE(edit_match("a ; b ;", "a x ; b x ;", "a x ; b x ;"));
  EXPECT_FALSE(edit_match("a ; b ;", "a x ; b ;", "a x ; b x ;"));
  EXPECT_TRUE(edit_match("a ; b ;", "a x y ; b x ;", "a x ; b x ;"));
}

TEST(RelativeEditError, Formula) {
  EXPECT_DOUBLE_EQ(relative_edit_error(kInput, kReference, kReference), 0.0);
  EXPECT_DOUBLE_EQ(relative_edit_error("a ;", "a b c d e f g ;", "a b c d e ;"), (6.0 - 4.0) / 4.0);
}

TEST(RelativeEditError, ZeroReferenceEdits) {
  try {
    relative_edit_error("a ;", "a b ;", "a ;");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroReferenceEdits);
  }
}

TEST(CodeBleu, Identity) {
  EXPECT_DOUBLE_EQ(codebleu(kReference, kReference).score, 1.0);
  const CodeBleu cb = codebleu(kReference, "  " + std::string(kReference) + "\n");
  EXPECT_DOUBLE_EQ(cb.score, 1.0);
}

// Hand computation: p1 = p2 = p3 = p4 = 0, so both n-gram components are 0;
// neither side is a method, so structure and data flow are 0.
TEST(CodeBleu, DisjointVocabulary) {
  const CodeBleu cb = codebleu("a b c d e", "f g h i j");
  EXPECT_LT(cb.score, 0.1);
  EXPECT_DOUBLE_EQ(cb.ngram, 0.0);
  EXPECT_TRUE(cb.degraded);
}

// p1 = 3/3, p2 = 3/3, p3 = 2/2, p4 = 1/1 after add-one; BP = exp(1 - 4/3).
TEST(CodeBleu, BleuByHand) {
  EXPECT_NEAR(detail::bleu({"a", "b", "c"}, {"a", "b", "c", "d"}), std::exp(-1.0 / 3.0), 1e-12);
}

// Unigram precision 1/2 unweighted; keyword `return` weighs 4: 4/5.
TEST(CodeBleu, KeywordWeighting) {
  const Texts cand{"return", "x"};
  const Texts ref{"return", "y"};
  const double p234 = std::log(1.0 / 2.0);  // p2 = (0+1)/(1+1); p3, p4 = 1/1
  EXPECT_NEAR(detail::bleu(cand, ref), std::exp((std::log(0.5) + p234) / 4), 1e-12);
  EXPECT_NEAR(detail::bleu(cand, ref, 4.0), std::exp((std::log(0.8) + p234) / 4), 1e-12);
}

TEST(CodeBleu, DegradedCandidateKeepsNgrams) {
  const CodeBleu cb = codebleu("public void save(Item item) { if (", kReference);
  EXPECT_TRUE(cb.degraded);
  EXPECT_GT(cb.ngram, 0.0);
  EXPECT_DOUBLE_EQ(cb.syntax, 0.0);
  EXPECT_DOUBLE_EQ(cb.dataflow, 0.0);
}

TEST(CodeBleu, RenamingKeepsDataFlow) {
  const CodeBleu cb = codebleu("int f(int a) { int b = a + 1; b = b * 2; return b; }",
                               "int f(int q) { int r = q + 1; r = r * 2; return r; }");
  EXPECT_DOUBLE_EQ(cb.syntax, 1.0);
  EXPECT_DOUBLE_EQ(cb.dataflow, 1.0);
  EXPECT_LT(cb.ngram, 1.0);
}

TEST(DataFlow, EdgesGolden) {
  auto ast =
      java::parse_method("int f(int a) { int b = a + 1; b = b * 2; return b; }",
                         {java::TagPolicy::kOptional})
          .ast;
  EXPECT_EQ(java::dataflow_edges(ast),
            (Texts{"use var0 d1", "def var1 <- var0", "use var1 d1", "def var1 <- var1",
                   "use var1 d2"}));
}

TEST(DataFlow, IncrementsAndLoops) {
  auto ast = java::parse_method(
                 "int f(int[] xs) { int s = 0; for (int x : xs) { s += x; } s++; return s; }",
                 {java::TagPolicy::kOptional})
                 .ast;
  EXPECT_EQ(java::dataflow_edges(ast),
            (Texts{"use var0 d1", "def var2 <- var0", "use var2 d1", "use var1 d1",
                   "def var1 <- var1", "def var1 <- var2", "use var1 d2", "def var1 <- var1",
                   "use var1 d3"}));
}

// Randomized triples from token-level mutations of a base method.
Texts mutate(const Texts& base, std::mt19937& rng) {
  static const Texts kPool{"x", "y", "1", "+", ";", "return", "if", "(", ")"};
  Texts t = base;
  const int edits = static_cast<int>(rng() % 4);
  for (int e = 0; e < edits; ++e) {
    const std::size_t at = rng() % (t.size() + 1);
    if (rng() % 2 == 0 && at < t.size()) {
      t.erase(t.begin() + static_cast<long>(at));
    } else {
      t.insert(t.begin() + static_cast<long>(at), kPool[rng() % kPool.size()]);
    }
  }
  return t;
}

std::string join(const Texts& t, bool wide) {
  std::string s;
  for (const auto& x : t) s += x + (wide ? "   " : " ");
  return s;
}

TEST(MetricsProperties, RandomTriples) {
  const Texts base = token_texts(tokenize("int f(int x) { int y = x + 1; return y; }"));
  std::mt19937 rng(3);
  int em_count = 0;
  for (int trial = 0; trial < 1500; ++trial) {
    const Texts input = base;
    Texts ref = mutate(base, rng);
    if (ref == input) ref.push_back(";");
    const Texts cand = rng() % 3 == 0 ? ref : mutate(ref, rng);
    const std::string i = join(input, false);
    const std::string c = join(cand, false);
    const std::string r = join(ref, false);
    const MetricsRecord m = evaluate(i, c, r);
    if (m.exm) {
      EXPECT_TRUE(m.em);
      ASSERT_TRUE(m.ree.has_value());
      EXPECT_DOUBLE_EQ(*m.ree, 0.0);
    }
    EXPECT_EQ(m.ree.has_value(), m.em);
    if (m.em) {
      ++em_count;
      EXPECT_GE(*m.ree, 0.0);
    }
    EXPECT_GE(m.codebleu, 0.0);
    EXPECT_LE(m.codebleu, 1.0);
    const MetricsRecord w = evaluate(join(input, true), join(cand, true), join(ref, true));
    EXPECT_EQ(w.exm, m.exm);
    EXPECT_EQ(w.em, m.em);
    EXPECT_EQ(w.ree, m.ree);
    EXPECT_DOUBLE_EQ(w.codebleu, m.codebleu);
  }
  EXPECT_GT(em_count, 100);
}

TEST(MetricsProperties, SelfScoreIsOne) {
  for (const char* src : {kReference, kCandidateExtra, "void g() { }",
                          "int h(int n) { int a = n; while (a > 0) { a--; } return a; }"}) {
    EXPECT_DOUBLE_EQ(codebleu(src, src).score, 1.0) << src;
  }
}

}  // namespace
}  // namespace acrc::metrics
