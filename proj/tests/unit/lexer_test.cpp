#include <gtest/gtest.h>

#include <random>
#include <string>
#include <vector>

#include "acrc/lexer.hpp"

namespace acrc {
namespace {

using Texts = std::vector<std::string>;

TEST(Lexer, DeclarationGolden) {
  const TokenStream t = tokenize("int x = 0;");
  EXPECT_EQ(token_texts(t), (Texts{"int", "x", "=", "0", ";"}));
  EXPECT_EQ(t[0].kind, TokenKind::kKeyword);
  EXPECT_EQ(t[1].kind, TokenKind::kIdentifier);
  EXPECT_EQ(t[2].kind, TokenKind::kOperator);
  EXPECT_EQ(t[3].kind, TokenKind::kLiteral);
  EXPECT_EQ(t[4].kind, TokenKind::kSeparator);
}

TEST(Lexer, Empty) { EXPECT_TRUE(tokenize("").empty()); }

TEST(Lexer, TagsAreSingleTokens) {
  const TokenStream t = tokenize("<START> return x; <END>");
  EXPECT_EQ(token_texts(t), (Texts{"<START>", "return", "x", ";", "<END>"}));
  EXPECT_EQ(t.front().kind, TokenKind::kTag);
  EXPECT_EQ(t.back().kind, TokenKind::kTag);
}

TEST(Lexer, CompoundOperatorsAndLiterals) {
  EXPECT_EQ(token_texts(tokenize("a>>>=b<=c&&d!=e->f::g...")),
            (Texts{"a", ">>>=", "b", "<=", "c", "&&", "d", "!=", "e", "->", "f", "::",
                   "g", "..."}));
  EXPECT_EQ(token_texts(tokenize("0.5f 1_000L 0x1Fp 'c' \"s\\\"t\" 1e-3 .5")),
            (Texts{"0.5f", "1_000L", "0x1F", "p", "'c'", "\"s\\\"t\"", "1e-3", ".5"}));
  EXPECT_EQ(token_texts(tokenize("x.length 3.toString")),
            (Texts{"x", ".", "length", "3", ".", "toString"}));
}

TEST(Lexer, CommentsDroppedExceptReview) {
  const TokenStream t = tokenize("a(); // plain\n/* block */ b(); // REVIEW: fix it\nc();");
  EXPECT_EQ(token_texts(t),
            (Texts{"a", "(", ")", ";", "b", "(", ")", ";", "// REVIEW: fix it", "c", "(",
                   ")", ";"}));
  EXPECT_EQ(t[8].kind, TokenKind::kComment);
}

TEST(Lexer, UnknownCharactersAreOperators) {
  const TokenStream t = tokenize("a # b");
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[1].kind, TokenKind::kOperator);
}

TEST(Lexer, OffsetsPointIntoSource) {
  const std::string src = "  int  y;";
  for (const Token& t : tokenize(src)) EXPECT_EQ(src.substr(t.offset, t.text.size()), t.text);
}

// Single-space joining re-lexes to the same stream. Streams with line
// comments are excluded: a joined line comment swallows the rest.
TEST(LexerProperty, SpaceJoinIdempotence) {
  const std::vector<std::string> atoms = {
      "int", "x", "=", "==", "0", "0.5f", ";", "(", ")", "{", "}", "<", ">", ">>",
      "<START>", "<END>", "\"s t\"", "'c'", "+", "++", "-", "->", "::", ".", "a1",
      "return", "null", "[", "]", "&&", "!", "?", ":", "...", "@", "/", "*"};
  std::mt19937_64 rng(7);
  for (int round = 0; round < 2000; ++round) {
    std::string src;
    const int n = static_cast<int>(rng() % 16);
    for (int i = 0; i < n; ++i) {
      src += atoms[rng() % atoms.size()];
      src += (rng() % 3 == 0) ? "" : " ";
    }
    const TokenStream first = tokenize(src);
    const TokenStream again = tokenize(join_tokens(first));
    ASSERT_EQ(token_texts(again), token_texts(first)) << src;
  }
}

TEST(LexerProperty, WhitespaceInsensitive) {
  EXPECT_EQ(token_texts(tokenize("if(a){b();}")),
            token_texts(tokenize("if ( a )\n{\n\tb ( ) ;\n}")));
}

}  // namespace
}  // namespace acrc
