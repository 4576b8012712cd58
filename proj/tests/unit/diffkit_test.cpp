#include <gtest/gtest.h>

#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "acrc/diffkit.hpp"

namespace acrc::diff {
namespace {

// Prefix-indexed memoized recursion; the implementation uses a rolling row.
std::size_t oracle_levenshtein(const Texts& a, const Texts& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) {
    if (i == 0) return j;
    if (j == 0) return i;
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t best = std::min(go(i - 1, j) + 1, go(i, j - 1) + 1);
    best = std::min(best, go(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1));
    return memo[key] = best;
  };
  return go(a.size(), b.size());
}

bool is_subsequence(const Texts& s, const Texts& of) {
  std::size_t j = 0;
  for (const auto& t : of) {
    if (j < s.size() && s[j] == t) ++j;
  }
  return j == s.size();
}

// LCS by enumerating every subsequence of `a`.
std::size_t oracle_lcs(const Texts& a, const Texts& b) {
  std::size_t best = 0;
  for (unsigned mask = 0; mask < (1u << a.size()); ++mask) {
    Texts sub;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (mask & (1u << i)) sub.push_back(a[i]);
    }
    if (sub.size() > best && is_subsequence(sub, b)) best = sub.size();
  }
  return best;
}

Texts random_stream(std::mt19937& rng, std::size_t max_len) {
  static const char* kAlphabet[] = {"a", "b", "c"};
  Texts t(rng() % (max_len + 1));
  for (auto& s : t) s = kAlphabet[rng() % 3];
  return t;
}

std::vector<Texts> all_streams(std::size_t max_len) {
  std::vector<Texts> out{{}};
  for (std::size_t begin = 0, len = 1; len <= max_len; ++len) {
    const std::size_t end = out.size();
    for (std::size_t k = begin; k < end; ++k) {
      if (out[k].size() != len - 1) continue;
      for (const char* s : {"a", "b", "c"}) {
        Texts t = out[k];
        t.push_back(s);
        out.push_back(std::move(t));
      }
    }
    begin = end;
  }
  return out;
}

void expect_valid(const Texts& a, const Texts& b, const EditScript& s) {
  EXPECT_EQ(apply_script(a, s), b);
  std::size_t ins = 0;
  std::size_t del = 0;
  for (std::size_t r = 0; r < s.regions.size(); ++r) {
    const EditRegion& reg = s.regions[r];
    EXPECT_FALSE(reg.tokens.empty());
    (reg.kind == EditKind::kInsert ? ins : del) += reg.tokens.size();
    if (r > 0) {
      const EditRegion& prev = s.regions[r - 1];
      const std::size_t prev_end =
          prev.anchor + (prev.kind == EditKind::kDelete ? prev.tokens.size() : 0);
      EXPECT_FALSE(prev.kind == reg.kind && prev_end == reg.anchor) << "non-maximal region";
    }
  }
  EXPECT_EQ(ins, s.inserted);
  EXPECT_EQ(del, s.deleted);
}

TEST(Diffkit, DistanceExamples) {
  const Texts x{"int", "x", "=", "0", ";"};
  EXPECT_EQ(token_edit_distance(x, x), 0u);
  const Texts y{"int", "y", "=", "0", ";"};
  EXPECT_EQ(token_edit_distance(x, y), oracle_levenshtein(x, y));
  EXPECT_EQ(token_edit_distance(x, y), 1u);
  EXPECT_EQ(token_edit_distance(Texts{"a", "b", "c"}, Texts{}), 3u);
}

TEST(Diffkit, DistanceOnTokenStreams) {
  EXPECT_EQ(token_edit_distance(tokenize("int x = 0;"), tokenize("int   y=0;")), 1u);
}

TEST(Diffkit, IdenticalScriptIsEmpty) {
  const Texts x{"a", "b", "c"};
  const EditScript s = edit_script(x, x);
  EXPECT_TRUE(s.empty());
  EXPECT_EQ(s.size(), 0u);
}

// Every insert/delete script of length <= 2 from [a,b]; the minimum must
// turn [a,b] into [a,c] with exactly 2 edits.
TEST(Diffkit, SubstitutionIsDeletePlusInsert) {
  const Texts src{"a", "b"};
  const Texts dst{"a", "c"};
  std::size_t minimal = 99;
  const Texts alphabet{"a", "b", "c"};
  std::function<void(Texts, std::size_t)> explore = [&](Texts cur, std::size_t used) {
    if (cur == dst) minimal = std::min(minimal, used);
    if (used == 2) return;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      Texts t = cur;
      t.erase(t.begin() + static_cast<long>(i));
      explore(t, used + 1);
    }
    for (std::size_t i = 0; i <= cur.size(); ++i) {
      for (const auto& s : alphabet) {
        Texts t = cur;
        t.insert(t.begin() + static_cast<long>(i), s);
        explore(t, used + 1);
      }
    }
  };
  explore(src, 0);
  ASSERT_EQ(minimal, 2u);

  const EditScript s = edit_script(src, dst);
  EXPECT_EQ(s.size(), minimal);
  ASSERT_EQ(s.regions.size(), 2u);
  EXPECT_EQ(s.regions[0], (EditRegion{EditKind::kDelete, 1, {"b"}}));
  EXPECT_EQ(s.regions[1], (EditRegion{EditKind::kInsert, 2, {"c"}}));
}

TEST(Diffkit, LeftmostTieBreaking) {
  const EditScript grow = edit_script(Texts{"a"}, Texts{"a", "a"});
  ASSERT_EQ(grow.regions.size(), 1u);
  EXPECT_EQ(grow.regions[0], (EditRegion{EditKind::kInsert, 1, {"a"}}));

  const EditScript shrink = edit_script(Texts{"a", "a"}, Texts{"a"});
  ASSERT_EQ(shrink.regions.size(), 1u);
  EXPECT_EQ(shrink.regions[0], (EditRegion{EditKind::kDelete, 1, {"a"}}));

  const EditScript twice = edit_script(Texts{"x", "a", "y"}, Texts{"a", "a"});
  EXPECT_EQ(apply_script(Texts{"x", "a", "y"}, twice), (Texts{"a", "a"}));
  EXPECT_EQ(twice.regions.front(), (EditRegion{EditKind::kDelete, 0, {"x"}}));
}

TEST(Diffkit, ExhaustiveSmallStreams) {
  const std::vector<Texts> all = all_streams(4);
  for (const Texts& a : all) {
    for (const Texts& b : all) {
      const std::size_t d = token_edit_distance(a, b);
      ASSERT_EQ(d, oracle_levenshtein(a, b));
      const EditScript s = edit_script(a, b);
      ASSERT_EQ(s.size(), a.size() + b.size() - 2 * oracle_lcs(a, b));
      expect_valid(a, b, s);
    }
  }
}

TEST(Diffkit, RandomPairsUpToTwelve) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 3000; ++trial) {
    const Texts a = random_stream(rng, 12);
    const Texts b = random_stream(rng, 12);
    const std::size_t d = token_edit_distance(a, b);
    ASSERT_EQ(d, oracle_levenshtein(a, b));
    ASSERT_EQ(d, token_edit_distance(b, a));
    ASSERT_EQ(d == 0, a == b);
    const EditScript s = edit_script(a, b);
    ASSERT_EQ(s.size(), a.size() + b.size() - 2 * oracle_lcs(a, b));
    ASSERT_LE(d, s.size());
    ASSERT_LE(s.size(), 2 * d);
    expect_valid(a, b, s);
  }
}

TEST(Diffkit, Deterministic) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Texts a = random_stream(rng, 10);
    const Texts b = random_stream(rng, 10);
    const EditScript s1 = edit_script(a, b);
    const EditScript s2 = edit_script(a, b);
    EXPECT_EQ(s1.regions, s2.regions);
  }
}

}  // namespace
}  // namespace acrc::diff
