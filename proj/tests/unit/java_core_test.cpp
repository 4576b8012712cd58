#include <gtest/gtest.h>

#include <string>

#include "acrc/java/parser.hpp"
#include "acrc/java/printer.hpp"
#include "acrc/java/resolve.hpp"

namespace acrc::java {
namespace {

std::string roundtrip(const std::string& src, ParseOptions opts = {}) {
  return serialize(parse_method(src, opts).ast);
}

void expect_stable(const std::string& src, ParseOptions opts = {}) {
  ParsedMethod a = parse_method(src, opts);
  const std::string text = serialize(a.ast);
  ParsedMethod b = parse_method(text, opts);
  EXPECT_TRUE(structurally_equal(a.ast.root, b.ast.root)) << text;
  EXPECT_EQ(text, serialize(b.ast));
}

TEST(Parser, SingleReturnSpan) {
  ParsedMethod m = parse_method("void f(){ <START> return; <END> }");
  ASSERT_EQ(m.ast.body().kids.size(), 5u);
  EXPECT_EQ(m.ast.body().kids[2].kind, Kind::kReturn);
  ASSERT_TRUE(m.span);
  EXPECT_LT(m.span->start, m.span->end);
  ASSERT_EQ(m.span->covered.size(), 1u);
  EXPECT_EQ(m.span->covered[0], m.ast.body().kids[2].id);
  EXPECT_TRUE(m.adjustments.empty());
}

TEST(Parser, TagOrderViolation) {
  try {
    parse_method("void f(){ <END> x(); <START> }");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedTags);
  }
}

TEST(Parser, TagCountViolations) {
  for (const char* src : {"void f(){ x(); }", "void f(){ <START> x(); }",
                          "void f(){ <START> <START> x(); <END> }"}) {
    try {
      parse_method(src);
      FAIL() << src;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kMalformedTags) << src;
    }
  }
}

TEST(Parser, EmptyBodyIsFine) {
  ParsedMethod m = parse_method("void f() { <START> <END> }");
  EXPECT_EQ(m.ast.body().kids.size(), 4u);
}

TEST(Parser, UnsupportedConstructsRaiseParseError) {
  const ParseOptions none{TagPolicy::kForbidden};
  for (const char* src :
       {"int f(int x) { return switch (x) { case 1 -> 2; default -> 3; }; }",
        "void f(int x) { switch (x) { case 1 -> a(); } }",
        "void f() { class L {} }", "void f() { x = ; }", "void f()"}) {
    try {
      parse_method(src, none);
      FAIL() << src;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParseError) << src;
    }
  }
}

TEST(Parser, MidStatementTagSnapsOutward) {
  ParsedMethod m = parse_method("int f(int a){ int b = <START> a + 1; <END> return b; }");
  ASSERT_EQ(m.adjustments.size(), 1u);
  EXPECT_EQ(serialize(m.ast),
            "int f(int a) {\n    <START>\n    int b = a + 1;\n    <END>\n    return b;\n}");
}

TEST(Parser, TagsLiftedToCommonList) {
  ParsedMethod m = parse_method(
      "void f(boolean c){ a(); if (c) { <START> b(); } d(); <END> }");
  EXPECT_FALSE(m.adjustments.empty());
  const Node& body = m.ast.body();
  EXPECT_TRUE(body.kids[2].is_start_marker());
  EXPECT_EQ(body.kids[3].kind, Kind::kIf);
}

TEST(Printer, CanonicalIfElse) {
  EXPECT_EQ(roundtrip("void f(){if(a){b();}else{c();}}", {TagPolicy::kForbidden}),
            "void f() {\n"
            "    if (a) {\n"
            "        b();\n"
            "    } else {\n"
            "        c();\n"
            "    }\n"
            "}");
}

TEST(Printer, ElseIfAndSingleStatementBodies) {
  EXPECT_EQ(roundtrip("int f(int x){if(x>0)return 1;else if(x<0)return -1;else return 0;}",
                      {TagPolicy::kForbidden}),
            "int f(int x) {\n"
            "    if (x > 0)\n"
            "        return 1;\n"
            "    else if (x < 0)\n"
            "        return -1;\n"
            "    else\n"
            "        return 0;\n"
            "}");
}

TEST(Printer, GenericsSplitShift) {
  const std::string src =
      "public static <T> List<List<T>> g(Map<String, List<T>> m) throws IOException {"
      " List<List<T>> out = new ArrayList<>(); <START> return out; <END> }";
  const std::string text = roundtrip(src);
  EXPECT_NE(text.find("List<List<T>> out = new ArrayList<>();"), std::string::npos) << text;
  EXPECT_EQ(token_texts(tokenize(text)), token_texts(tokenize(src)));
  expect_stable(src);
}

TEST(Printer, TokensMatchSourceAcrossConstructs) {
  const char* sources[] = {
      "void a(int[] xs) { for (int i = 0, j = 1; i < xs.length; i++, j--) { xs[i] += j; } <START> <END> }",
      "void b(List<String> l) { for (final String s : l) System.out.println(s); <START> <END> }",
      "int c(int x) { <START> switch (x) { case 1: case 2: return 3; default: { break; } } <END> return -x; }",
      "void d() throws Exception { try (InputStream in = open(); Reader r = wrap(in)) { in.read(); }"
      " catch (IOException | RuntimeException e) { throw e; } finally { close(); } <START> <END> }",
      "void e() { do { x--; } while (x > 0); outer: while (true) { break outer; } <START> <END> }",
      "Object f(Object o) { <START> return (String) o + (o instanceof Integer i ? i : -1) + ((int) 3.5f); <END> }",
      "void g() { Runnable r = () -> { run(); }; list.forEach(x -> System.out.println(x)); <START> <END> }",
      "void h() { int[][] grid = new int[3][]; int[] k = {1, 2, 3}; String[] s = new String[] {\"a\"}; <START> <END> }",
      "void i() { Object o = new Object() { public String toString() { return \"x\"; } }; <START> <END> }",
      "void j() { synchronized (this) { this.x = super.y; } assert x > 0 : \"neg\"; <START> <END> }",
      "void k() { Function<Integer, Integer> f = Math::abs; Supplier<List<String>> s = ArrayList::new; <START> <END> }",
      "void l() { int a = - -b; int c = a++ + ++a; boolean d = !(a > c) && ~a == 0; <START> <END> }",
      "void m() { Class<?> c = int[].class; Class<? extends Number> n = Integer.class; <START> <END> }",
      "void n() { x = y >> 2 >>> 1; y >>= 1; z = a < b ? a : b; <START> <END> }",
      "Foo(int x) { this(x, 0); <START> <END> }",
      "@Override public final synchronized String o(@Nullable final String... args) { <START> return String.<String>valueOf(args); <END> }",
  };
  for (const char* src : sources) {
    SCOPED_TRACE(src);
    const std::string text = roundtrip(src);
    EXPECT_EQ(token_texts(tokenize(text)), token_texts(tokenize(src))) << text;
    expect_stable(src);
  }
}

TEST(Printer, CommentsAttachAsTrivia) {
  const std::string src =
      "void f() {\n  // first\n  a(); /* inline */ b(c /* dropped */);\n"
      "  <START> x(); <END>\n  // REVIEW: keep this\n  y();\n  // tail\n}";
  ParsedMethod m = parse_method(src);
  const std::string text = serialize(m.ast);
  EXPECT_NE(text.find("    // first\n    a();"), std::string::npos) << text;
  EXPECT_NE(text.find("/* inline */"), std::string::npos) << text;
  EXPECT_EQ(text.find("dropped"), std::string::npos) << text;
  EXPECT_NE(text.find("    <END>\n    // REVIEW: keep this\n    y();"), std::string::npos)
      << text;
  EXPECT_NE(text.find("    // tail\n}"), std::string::npos) << text;
  expect_stable(src);
  int comments = 0;
  for (const Token& t : tokenize(text)) comments += t.kind == TokenKind::kComment;
  EXPECT_EQ(comments, 1);
}

TEST(Printer, PerturbedFlagsFollowNodes) {
  ParsedMethod m = parse_method("void f() { <START> a(); <END> b(); }");
  m.ast.body().kids[4].perturbed = true;
  const Rendered r = render(m.ast);
  ASSERT_EQ(r.tokens.size(), r.perturbed.size());
  std::string flagged;
  for (std::size_t i = 0; i < r.tokens.size(); ++i) {
    if (r.perturbed[i]) flagged += r.tokens[i].text;
  }
  EXPECT_EQ(flagged, "b();");
}

TEST(Printer, SpanRequiredButMissing) {
  ParsedMethod m = parse_method("void f() { a(); }", {TagPolicy::kForbidden});
  RenderOptions opts;
  opts.require_span = true;
  try {
    render(m.ast, opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSpanUnmappable);
  }
}

TEST(Printer, StatementIdsAndRanges) {
  ParsedMethod m = parse_method("void f() { a(); <START> { b(); } <END> c(); }");
  const Node& body = m.ast.body();
  std::uint32_t prev_end = 0;
  for (std::size_t i = 1; i + 1 < body.kids.size(); ++i) {
    const Node& s = body.kids[i];
    if (s.is_marker()) continue;
    EXPECT_GT(s.id, 0u);
    EXPECT_LT(s.begin, s.end);
    EXPECT_GE(s.begin, prev_end);
    prev_end = s.end;
  }
}

TEST(Resolve, ScopesAndReferences) {
  ParsedMethod m = parse_method(
      "int f(int a) { int b = a; for (int i = 0; i < b; i++) { b += i; }"
      " <START> return b + field + Math.abs(a); <END> }");
  Resolution r = resolve(m.ast);
  ASSERT_EQ(r.symbols.size(), 3u);
  EXPECT_EQ(r.symbols[0].name, "a");
  EXPECT_EQ(r.symbols[0].kind, SymbolKind::kParam);
  EXPECT_TRUE(r.unresolved.count("field"));
  EXPECT_TRUE(r.unresolved.count("Math"));
  EXPECT_FALSE(r.unresolved.count("abs"));
  int refs_to_b = 0;
  visit(m.ast.root, [&](const Node& n) {
    if (n.is_leaf() && n.symbol == 1) ++refs_to_b;
  });
  EXPECT_EQ(refs_to_b, 4);  // declaration + three uses
}

TEST(Resolve, LambdaBodiesSeeEnclosingLocals) {
  ParsedMethod m = parse_method(
      "void f(List<String> xs) { String p = \"a\"; <START> xs.forEach(x -> use(p, x.p)); <END> }");
  Resolution r = resolve(m.ast);
  int p_uses = 0;
  visit(m.ast.root, [&](const Node& n) {
    if (n.is_leaf("p") && n.symbol >= 0) ++p_uses;
  });
  EXPECT_EQ(p_uses, 2);  // declaration + lambda use, `x.p` excluded
}

}  // namespace
}  // namespace acrc::java
