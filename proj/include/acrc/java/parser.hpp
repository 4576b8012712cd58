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

/// @file parser.hpp
/// @brief Recursive-descent parser for a single Java method declaration.
///
/// The parser works on the comment- and tag-free token stream and produces a
/// concrete syntax tree (every token is a leaf). Comments and `<START>`/`<END>`
/// tags are placed afterwards, at statement boundaries:
///
///  - a comment at a statement boundary becomes trivia of the next statement
///    (or trailing trivia of the enclosing block); other comments are dropped;
///  - a tag at a statement boundary becomes a marker item in that list; a tag
///    inside a statement snaps outward to that statement's boundary, and both
///    markers are lifted until they share one statement list. Every snap is
///    reported as a SnapAdjustment.
///
/// Lambda bodies and anonymous class bodies are kept as opaque token runs.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "acrc/error.hpp"
#include "acrc/java/ast.hpp"
#include "acrc/java/printer.hpp"
#include "acrc/lexer.hpp"

namespace acrc::java {

enum class TagPolicy {
  kRequired,   // exactly one <START> ... <END> pair
  kForbidden,  // no tags at all
  kOptional,   // none, or exactly one ordered pair
};

struct ParseOptions {
  TagPolicy tags = TagPolicy::kRequired;
};

struct SnapAdjustment {
  std::string tag;
  std::size_t source_offset = 0;  // byte offset of the tag in the input
  std::string reason;
};

struct ParsedMethod {
  MethodAst ast;
  std::optional<TaggedSpan> span;
  std::vector<SnapAdjustment> adjustments;
};

namespace detail {

inline bool is_primitive(std::string_view t) {
  return t == "boolean" || t == "byte" || t == "char" || t == "short" ||
         t == "int" || t == "long" || t == "float" || t == "double";
}

inline bool is_modifier(std::string_view t) {
  return t == "public" || t == "protected" || t == "private" ||
         t == "static" || t == "final" || t == "abstract" ||
         t == "synchronized" || t == "native" || t == "strictfp" ||
         t == "transient" || t == "volatile" || t == "default";
}

inline bool is_assign_op(std::string_view t) {
  return t == "=" || t == "+=" || t == "-=" || t == "*=" || t == "/=" ||
         t == "%=" || t == "&=" || t == "|=" || t == "^=" || t == "<<=" ||
         t == ">>=" || t == ">>>=";
}

inline int binary_precedence(std::string_view t) {
  if (t == "||") return 1;
  if (t == "&&") return 2;
  if (t == "|") return 3;
  if (t == "^") return 4;
  if (t == "&") return 5;
  if (t == "==" || t == "!=") return 6;
  if (t == "<" || t == ">" || t == "<=" || t == ">=" || t == "instanceof") {
    return 7;
  }
  if (t == "<<" || t == ">>" || t == ">>>") return 8;
  if (t == "+" || t == "-") return 9;
  if (t == "*" || t == "/" || t == "%") return 10;
  return 0;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Node parse_method_decl() {
    Node m = Node::of(Kind::kMethod);
    m.begin = 0;
    m.kids.push_back(parse_modifiers());
    if (at("<")) m.kids.push_back(parse_type_params());
    if (at_kind(TokenKind::kIdentifier) && peek_is(1, "(")) {
      // constructor: no return type
    } else if (at("void")) {
      Node t = Node::of(Kind::kType);
      t.kids.push_back(take());
      m.kids.push_back(std::move(t));
    } else {
      m.kids.push_back(parse_type());
    }
    if (!at_kind(TokenKind::kIdentifier)) fail("expected method name");
    m.kids.push_back(take());
    m.kids.push_back(parse_params());
    if (at("[")) fail("array dimensions after parameter list are unsupported");
    if (at("throws")) {
      Node th = Node::of(Kind::kThrows);
      th.kids.push_back(take());
      th.kids.push_back(parse_type());
      while (at(",")) {
        th.kids.push_back(take());
        th.kids.push_back(parse_type());
      }
      m.kids.push_back(std::move(th));
    }
    if (at(";")) fail("method without a body");
    if (!at("{")) fail("expected method body");
    m.kids.push_back(parse_block());
    if (!eof()) fail("unexpected tokens after method body");
    m.end = static_cast<std::uint32_t>(pos_);
    return m;
  }

 private:
  // ---- token access -------------------------------------------------------

  bool eof() const { return pos_ >= toks_.size(); }

  std::string_view cur_text() const {
    if (eof()) return {};
    return std::string_view(toks_[pos_].text).substr(split_);
  }

  bool at(std::string_view t) const { return !eof() && cur_text() == t; }

  bool at_kind(TokenKind k) const { return !eof() && toks_[pos_].kind == k; }

  bool peek_is(std::size_t ahead, std::string_view t) const {
    return pos_ + ahead < toks_.size() && toks_[pos_ + ahead].text == t;
  }

  const Token* peek(std::size_t ahead) const {
    return pos_ + ahead < toks_.size() ? &toks_[pos_ + ahead] : nullptr;
  }

  Node take() {
    if (eof()) fail("unexpected end of input");
    Node leaf = Node::leaf(toks_[pos_].kind, std::string(cur_text()));
    ++pos_;
    split_ = 0;
    return leaf;
  }

  Node expect(std::string_view t) {
    if (!at(t)) fail("expected '" + std::string(t) + "'");
    return take();
  }

  Node expect_ident() {
    if (!at_kind(TokenKind::kIdentifier)) fail("expected identifier");
    return take();
  }

  // Consumes one `>` closing a type argument list, splitting `>>`/`>>>`.
  Node take_close_angle() {
    const std::string_view t = cur_text();
    if (t == ">") return take();
    if (t == ">>" || t == ">>>") {
      Node leaf = Node::op(">");
      leaf.glue_right = true;
      ++split_;
      return leaf;
    }
    fail("expected '>'");
  }

  [[noreturn]] void fail(const std::string& message) const {
    std::string where = eof() ? "end of input"
                              : "token " + std::to_string(pos_) + " '" +
                                    toks_[pos_].text + "' at byte " +
                                    std::to_string(toks_[pos_].offset);
    throw Error(ErrorCode::kParseError, message + " (" + where + ")");
  }

  struct State {
    std::size_t pos;
    std::size_t split;
  };
  State save() const { return {pos_, split_}; }
  void restore(State s) {
    pos_ = s.pos;
    split_ = s.split;
  }

  template <typename Fn>
  bool speculate(Fn&& fn) {
    const State s = save();
    bool ok = false;
    try {
      ok = fn();
    } catch (const Error&) {
      ok = false;
    }
    restore(s);
    return ok;
  }

  // ---- declarations ---------------------------------------------------------

  Node parse_annotation() {
    Node a = Node::of(Kind::kAnnotation);
    a.kids.push_back(expect("@"));
    a.kids.push_back(expect_ident());
    while (at(".") && peek(1) && peek(1)->kind == TokenKind::kIdentifier) {
      a.kids.push_back(take());
      a.kids.push_back(take());
    }
    if (at("(")) consume_balanced(a, "(", ")");
    return a;
  }

  Node parse_modifiers() {
    Node mods = Node::of(Kind::kModifiers);
    while (!eof()) {
      if (at("@") && !peek_is(1, "interface")) {
        mods.kids.push_back(parse_annotation());
      } else if (at_kind(TokenKind::kKeyword) && is_modifier(cur_text())) {
        mods.kids.push_back(take());
      } else {
        break;
      }
    }
    return mods;
  }

  Node parse_type_params() {
    Node tp = Node::of(Kind::kTypeParams);
    tp.kids.push_back(expect("<"));
    while (true) {
      tp.kids.push_back(expect_ident());
      if (at("extends")) {
        tp.kids.push_back(take());
        tp.kids.push_back(parse_type());
        while (at("&")) {
          tp.kids.push_back(take());
          tp.kids.push_back(parse_type());
        }
      }
      if (at(",")) {
        tp.kids.push_back(take());
        continue;
      }
      break;
    }
    tp.kids.push_back(take_close_angle());
    return tp;
  }

  Node parse_type_args() {
    Node ta = Node::of(Kind::kTypeArgs);
    ta.kids.push_back(expect("<"));
    if (at(">")) {  // diamond
      ta.kids.push_back(take());
      return ta;
    }
    while (true) {
      if (at("?")) {
        Node wild = Node::of(Kind::kType);
        wild.kids.push_back(take());
        if (at("extends") || at("super")) {
          wild.kids.push_back(take());
          wild.kids.push_back(parse_type());
        }
        ta.kids.push_back(std::move(wild));
      } else {
        ta.kids.push_back(parse_type());
      }
      if (at(",")) {
        ta.kids.push_back(take());
        continue;
      }
      break;
    }
    ta.kids.push_back(take_close_angle());
    return ta;
  }

  Node parse_type(bool with_dims = true) {
    Node t = Node::of(Kind::kType);
    if (at_kind(TokenKind::kKeyword) && is_primitive(cur_text())) {
      t.kids.push_back(take());
    } else if (at_kind(TokenKind::kIdentifier)) {
      t.kids.push_back(take());
      if (at("<")) t.kids.push_back(parse_type_args());
      while (at(".") && peek(1) && peek(1)->kind == TokenKind::kIdentifier) {
        t.kids.push_back(take());
        t.kids.push_back(take());
        if (at("<")) t.kids.push_back(parse_type_args());
      }
    } else {
      fail("expected type");
    }
    if (with_dims) {
      while (at("[") && peek_is(1, "]")) {
        t.kids.push_back(take());
        t.kids.push_back(take());
      }
    }
    return t;
  }

  Node parse_params() {
    Node ps = Node::of(Kind::kParams);
    ps.kids.push_back(expect("("));
    if (!at(")")) {
      while (true) {
        Node p = Node::of(Kind::kParam);
        p.kids.push_back(parse_modifiers());
        p.kids.push_back(parse_type());
        if (at("...")) p.kids.push_back(take());
        if (at("this")) fail("receiver parameters are unsupported");
        p.kids.push_back(expect_ident());
        while (at("[") && peek_is(1, "]")) {
          p.kids.push_back(take());
          p.kids.push_back(take());
        }
        ps.kids.push_back(std::move(p));
        if (at(",")) {
          ps.kids.push_back(take());
          continue;
        }
        break;
      }
    }
    ps.kids.push_back(expect(")"));
    return ps;
  }

  // Appends a balanced run of leaves from `open` to its matching `close`.
  void consume_balanced(Node& into, std::string_view open,
                        std::string_view close) {
    int depth = 0;
    do {
      if (eof()) fail("unbalanced '" + std::string(open) + "'");
      if (at(open)) ++depth;
      if (at(close)) --depth;
      into.kids.push_back(take());
    } while (depth > 0);
  }

  // ---- statements -----------------------------------------------------------

  Node parse_block() {
    Node b = Node::of(Kind::kBlock);
    b.begin = static_cast<std::uint32_t>(pos_);
    b.kids.push_back(expect("{"));
    while (!at("}")) {
      if (eof()) fail("unterminated block");
      b.kids.push_back(parse_statement());
    }
    b.kids.push_back(take());
    b.end = static_cast<std::uint32_t>(pos_);
    return b;
  }

  bool local_var_ahead() {
    return speculate([&] {
      parse_modifiers();
      if (at("var") && peek(1) && peek(1)->kind == TokenKind::kIdentifier) {
        return true;
      }
      parse_type();
      if (!at_kind(TokenKind::kIdentifier)) return false;
      const Token* next = peek(1);
      if (!next) return false;
      return next->text == "=" || next->text == ";" || next->text == "," ||
             next->text == "[" || next->text == ":";
    });
  }

  void reject_local_type_decl() {
    const bool decl = speculate([&] {
      parse_modifiers();
      return at("class") || at("interface") || at("enum") ||
             (at("record") && peek(1) &&
              peek(1)->kind == TokenKind::kIdentifier && peek_is(2, "("));
    });
    if (decl) fail("local type declarations are unsupported");
  }

  Node parse_statement() {
    const std::size_t begin = pos_;
    Node s = parse_statement_inner();
    s.begin = static_cast<std::uint32_t>(begin);
    s.end = static_cast<std::uint32_t>(pos_);
    return s;
  }

  Node parse_statement_inner() {
    if (at("{")) return parse_block();
    if (at(";")) return Node::of(Kind::kEmpty, {take()});
    if (at("if")) return parse_if();
    if (at("while")) {
      Node w = Node::of(Kind::kWhile);
      w.kids.push_back(take());
      push_paren_expr(w);
      w.kids.push_back(parse_statement());
      return w;
    }
    if (at("do")) {
      Node d = Node::of(Kind::kDo);
      d.kids.push_back(take());
      d.kids.push_back(parse_statement());
      d.kids.push_back(expect("while"));
      push_paren_expr(d);
      d.kids.push_back(expect(";"));
      return d;
    }
    if (at("for")) return parse_for();
    if (at("try")) return parse_try();
    if (at("return")) {
      Node r = Node::of(Kind::kReturn);
      r.kids.push_back(take());
      if (!at(";")) r.kids.push_back(parse_expr());
      r.kids.push_back(expect(";"));
      return r;
    }
    if (at("throw")) {
      Node t = Node::of(Kind::kThrow);
      t.kids.push_back(take());
      t.kids.push_back(parse_expr());
      t.kids.push_back(expect(";"));
      return t;
    }
    if (at("break") || at("continue")) {
      Node b = Node::of(at("break") ? Kind::kBreak : Kind::kContinue);
      b.kids.push_back(take());
      if (at_kind(TokenKind::kIdentifier)) b.kids.push_back(take());
      b.kids.push_back(expect(";"));
      return b;
    }
    if (at("switch")) return parse_switch();
    if (at("synchronized") && peek_is(1, "(")) {
      Node s = Node::of(Kind::kSync);
      s.kids.push_back(take());
      push_paren_expr(s);
      s.kids.push_back(parse_block());
      return s;
    }
    if (at("assert")) {
      Node a = Node::of(Kind::kAssert);
      a.kids.push_back(take());
      a.kids.push_back(parse_expr());
      if (at(":")) {
        a.kids.push_back(take());
        a.kids.push_back(parse_expr());
      }
      a.kids.push_back(expect(";"));
      return a;
    }
    if (at("case") || at("default")) fail("case label outside switch");
    if (at("yield") && !peek_is(1, "=") && !peek_is(1, "(")) {
      fail("yield statements are unsupported");
    }
    if (at_kind(TokenKind::kIdentifier) && peek_is(1, ":")) {
      Node l = Node::of(Kind::kLabeled);
      l.kids.push_back(take());
      l.kids.push_back(take());
      l.kids.push_back(parse_statement());
      return l;
    }
    reject_local_type_decl();
    if (local_var_ahead()) {
      Node v = parse_local_var_body(Kind::kLocalVar);
      v.kids.push_back(expect(";"));
      return v;
    }
    Node e = Node::of(Kind::kExprStmt);
    e.kids.push_back(parse_expr());
    e.kids.push_back(expect(";"));
    return e;
  }

  void push_paren_expr(Node& into) {
    into.kids.push_back(expect("("));
    into.kids.push_back(parse_expr());
    into.kids.push_back(expect(")"));
  }

  Node parse_if() {
    Node s = Node::of(Kind::kIf);
    s.kids.push_back(take());
    push_paren_expr(s);
    s.kids.push_back(parse_statement());
    if (at("else")) {
      s.kids.push_back(take());
      s.kids.push_back(parse_statement());
    }
    return s;
  }

  // Modifiers Type Declarator (, Declarator)*  -- without the semicolon.
  Node parse_local_var_body(Kind kind) {
    Node v = Node::of(kind);
    v.kids.push_back(parse_modifiers());
    v.kids.push_back(parse_type());
    while (true) {
      Node d = Node::of(Kind::kDeclarator);
      d.kids.push_back(expect_ident());
      while (at("[") && peek_is(1, "]")) {
        d.kids.push_back(take());
        d.kids.push_back(take());
      }
      if (at("=")) {
        d.kids.push_back(take());
        d.kids.push_back(at("{") ? parse_array_init() : parse_expr());
      }
      v.kids.push_back(std::move(d));
      if (at(",")) {
        v.kids.push_back(take());
        continue;
      }
      break;
    }
    return v;
  }

  Node parse_for() {
    const bool for_each = speculate([&] {
      take();
      expect("(");
      parse_modifiers();
      parse_type();
      expect_ident();
      return at(":");
    });
    if (for_each) {
      Node f = Node::of(Kind::kForEach);
      f.kids.push_back(take());
      f.kids.push_back(expect("("));
      Node var = Node::of(Kind::kForVar);
      var.kids.push_back(parse_modifiers());
      var.kids.push_back(parse_type());
      var.kids.push_back(expect_ident());
      f.kids.push_back(std::move(var));
      f.kids.push_back(expect(":"));
      f.kids.push_back(parse_expr());
      f.kids.push_back(expect(")"));
      f.kids.push_back(parse_statement());
      return f;
    }
    Node f = Node::of(Kind::kFor);
    f.kids.push_back(take());
    f.kids.push_back(expect("("));
    Node init = Node::of(Kind::kForInit);
    if (!at(";")) {
      if (local_var_ahead()) {
        init.kids.push_back(parse_local_var_body(Kind::kLocalVar));
      } else {
        init.kids.push_back(parse_expr());
        while (at(",")) {
          init.kids.push_back(take());
          init.kids.push_back(parse_expr());
        }
      }
    }
    f.kids.push_back(std::move(init));
    f.kids.push_back(expect(";"));
    Node cond = Node::of(Kind::kForCond);
    if (!at(";")) cond.kids.push_back(parse_expr());
    f.kids.push_back(std::move(cond));
    f.kids.push_back(expect(";"));
    Node update = Node::of(Kind::kForUpdate);
    if (!at(")")) {
      update.kids.push_back(parse_expr());
      while (at(",")) {
        update.kids.push_back(take());
        update.kids.push_back(parse_expr());
      }
    }
    f.kids.push_back(std::move(update));
    f.kids.push_back(expect(")"));
    f.kids.push_back(parse_statement());
    return f;
  }

  Node parse_try() {
    Node t = Node::of(Kind::kTry);
    t.kids.push_back(take());
    if (at("(")) {
      Node res = Node::of(Kind::kResources);
      res.kids.push_back(take());
      while (!at(")")) {
        Node r = Node::of(Kind::kResource);
        const bool decl = speculate([&] {
          parse_modifiers();
          parse_type();
          expect_ident();
          return at("=");
        });
        if (decl) {
          r.kids.push_back(parse_modifiers());
          r.kids.push_back(parse_type());
          r.kids.push_back(expect_ident());
          r.kids.push_back(expect("="));
        }
        r.kids.push_back(parse_expr());
        res.kids.push_back(std::move(r));
        if (at(";")) res.kids.push_back(take());
        else if (!at(")")) fail("expected ';' or ')' in resource list");
      }
      res.kids.push_back(take());
      t.kids.push_back(std::move(res));
    }
    t.kids.push_back(parse_block());
    while (at("catch")) {
      Node c = Node::of(Kind::kCatch);
      c.kids.push_back(take());
      c.kids.push_back(expect("("));
      Node p = Node::of(Kind::kCatchParam);
      p.kids.push_back(parse_modifiers());
      p.kids.push_back(parse_type());
      while (at("|")) {
        p.kids.push_back(take());
        p.kids.push_back(parse_type());
      }
      p.kids.push_back(expect_ident());
      c.kids.push_back(std::move(p));
      c.kids.push_back(expect(")"));
      c.kids.push_back(parse_block());
      t.kids.push_back(std::move(c));
    }
    if (at("finally")) {
      Node f = Node::of(Kind::kFinally);
      f.kids.push_back(take());
      f.kids.push_back(parse_block());
      t.kids.push_back(std::move(f));
    }
    if (!t.find(Kind::kResources) && !t.find(Kind::kCatch) && !t.find(Kind::kFinally)) {
      fail("try without catch or finally");
    }
    return t;
  }

  Node parse_switch() {
    Node s = Node::of(Kind::kSwitch);
    s.kids.push_back(take());
    push_paren_expr(s);
    Node body = Node::of(Kind::kSwitchBody);
    body.begin = static_cast<std::uint32_t>(pos_);
    body.kids.push_back(expect("{"));
    while (!at("}")) {
      if (eof()) fail("unterminated switch");
      if (at("case") || at("default")) {
        const std::size_t begin = pos_;
        Node label = Node::of(Kind::kCaseLabel);
        if (at("default")) {
          label.kids.push_back(take());
        } else {
          label.kids.push_back(take());
          reject_arrow_case();
          label.kids.push_back(parse_ternary());
          while (at(",")) {
            label.kids.push_back(take());
            label.kids.push_back(parse_ternary());
          }
        }
        if (at("->")) fail("arrow-form switch cases are unsupported");
        label.kids.push_back(expect(":"));
        label.begin = static_cast<std::uint32_t>(begin);
        label.end = static_cast<std::uint32_t>(pos_);
        body.kids.push_back(std::move(label));
      } else {
        body.kids.push_back(parse_statement());
      }
    }
    body.kids.push_back(take());
    body.end = static_cast<std::uint32_t>(pos_);
    s.kids.push_back(std::move(body));
    return s;
  }

  void reject_arrow_case() {
    int depth = 0;
    for (std::size_t i = pos_; i < toks_.size(); ++i) {
      const std::string& t = toks_[i].text;
      if (t == "(" || t == "[" || t == "{") ++depth;
      if (t == ")" || t == "]" || t == "}") --depth;
      if (depth == 0 && t == ":") return;
      if (depth == 0 && t == "->") fail("arrow-form switch cases are unsupported");
      if (depth < 0) return;
    }
  }

  // ---- expressions ----------------------------------------------------------

  bool lambda_ahead() const {
    if (at_kind(TokenKind::kIdentifier) && peek_is(1, "->")) return true;
    if (!at("(") || split_ != 0) return false;
    int depth = 0;
    for (std::size_t i = pos_; i < toks_.size(); ++i) {
      if (toks_[i].text == "(") ++depth;
      if (toks_[i].text == ")" && --depth == 0) {
        return i + 1 < toks_.size() && toks_[i + 1].text == "->";
      }
    }
    return false;
  }

  Node parse_lambda() {
    Node l = Node::of(Kind::kLambda);
    if (at("(")) {
      consume_balanced(l, "(", ")");
    } else {
      l.kids.push_back(take());
    }
    l.kids.push_back(expect("->"));
    if (at("{")) {
      consume_balanced(l, "{", "}");
      return l;
    }
    int depth = 0;
    while (!eof()) {
      const std::string_view t = cur_text();
      if (depth == 0 && (t == "," || t == ")" || t == "]" || t == "}" || t == ";")) {
        break;
      }
      if (t == "(" || t == "[" || t == "{") ++depth;
      if (t == ")" || t == "]" || t == "}") --depth;
      l.kids.push_back(take());
    }
    if (l.kids.back().is_leaf("->")) fail("empty lambda body");
    return l;
  }

  Node parse_expr() {
    if (lambda_ahead()) return parse_lambda();
    Node lhs = parse_ternary();
    if (!eof() && is_assign_op(cur_text())) {
      Node a = Node::of(Kind::kAssign);
      a.kids.push_back(std::move(lhs));
      a.kids.push_back(take());
      a.kids.push_back(at("{") ? parse_array_init() : parse_expr());
      return a;
    }
    return lhs;
  }

  Node parse_ternary() {
    Node cond = parse_binary(1);
    if (!at("?")) return cond;
    Node t = Node::of(Kind::kTernary);
    t.kids.push_back(std::move(cond));
    t.kids.push_back(take());
    t.kids.push_back(parse_expr());
    t.kids.push_back(expect(":"));
    t.kids.push_back(lambda_ahead() ? parse_lambda() : parse_ternary());
    return t;
  }

  Node parse_binary(int min_prec) {
    Node lhs = parse_unary();
    while (!eof()) {
      const std::string_view op = cur_text();
      const int prec = binary_precedence(op);
      if (prec == 0 || prec < min_prec) break;
      if (op == "instanceof") {
        Node io = Node::of(Kind::kInstanceOf);
        io.kids.push_back(std::move(lhs));
        io.kids.push_back(take());
        if (at("final")) io.kids.push_back(take());
        io.kids.push_back(parse_type());
        if (at_kind(TokenKind::kIdentifier)) io.kids.push_back(take());
        lhs = std::move(io);
        continue;
      }
      Node b = Node::of(Kind::kBinary);
      b.kids.push_back(std::move(lhs));
      b.kids.push_back(take());
      b.kids.push_back(parse_binary(prec + 1));
      lhs = std::move(b);
    }
    return lhs;
  }

  bool starts_cast_operand() const {
    if (eof()) return false;
    const Token& t = toks_[pos_];
    if (t.kind == TokenKind::kIdentifier || t.kind == TokenKind::kLiteral) {
      return true;
    }
    return t.text == "(" || t.text == "!" || t.text == "~" || t.text == "this" ||
           t.text == "super" || t.text == "new" ||
           (t.kind == TokenKind::kKeyword && is_primitive(t.text));
  }

  Node parse_unary() {
    if (!eof() && (at("+") || at("-") || at("++") || at("--") || at("!") || at("~"))) {
      Node u = Node::of(Kind::kUnary);
      u.kids.push_back(take());
      u.kids.push_back(parse_unary());
      return u;
    }
    if (at("(") && !lambda_ahead()) {
      std::optional<bool> primitive;
      const bool cast = speculate([&] {
        take();
        Node type = parse_type();
        if (!at(")")) return false;
        take();
        primitive = is_primitive(type.kids.front().text);
        if (*primitive) return true;
        return starts_cast_operand() || lambda_ahead();
      });
      if (cast) {
        Node c = Node::of(Kind::kCast);
        c.kids.push_back(take());
        c.kids.push_back(parse_type());
        c.kids.push_back(expect(")"));
        c.kids.push_back(lambda_ahead() ? parse_lambda() : parse_unary());
        return c;
      }
    }
    return parse_postfix(parse_primary());
  }

  Node parse_args() {
    Node a = Node::of(Kind::kArgs);
    a.kids.push_back(expect("("));
    if (!at(")")) {
      while (true) {
        a.kids.push_back(parse_expr());
        if (at(",")) {
          a.kids.push_back(take());
          continue;
        }
        break;
      }
    }
    a.kids.push_back(expect(")"));
    return a;
  }

  Node parse_array_init() {
    Node a = Node::of(Kind::kArrayInit);
    a.kids.push_back(expect("{"));
    while (!at("}")) {
      a.kids.push_back(at("{") ? parse_array_init() : parse_expr());
      if (at(",")) {
        a.kids.push_back(take());
      } else if (!at("}")) {
        fail("expected ',' or '}' in array initializer");
      }
    }
    a.kids.push_back(take());
    return a;
  }

  // Re-labels the leaves of a name chain as a type (for `Foo[].class`).
  static Node as_type(Node expr) {
    Node t = Node::of(Kind::kType);
    std::vector<const Node*> leaves;
    collect_leaves(expr, leaves);
    for (const Node* l : leaves) t.kids.push_back(*l);
    return t;
  }

  Node parse_postfix(Node e) {
    while (!eof()) {
      if (at(".")) {
        const Token* next = peek(1);
        if (!next) fail("dangling '.'");
        if (next->text == "<") {
          Node c = Node::of(Kind::kCall);
          c.kids.push_back(std::move(e));
          c.kids.push_back(take());
          c.kids.push_back(parse_type_args());
          c.kids.push_back(expect_ident());
          c.kids.push_back(parse_args());
          e = std::move(c);
        } else if (next->kind == TokenKind::kIdentifier) {
          if (peek_is(2, "(")) {
            Node c = Node::of(Kind::kCall);
            c.kids.push_back(std::move(e));
            c.kids.push_back(take());
            c.kids.push_back(take());
            c.kids.push_back(parse_args());
            e = std::move(c);
          } else {
            Node f = Node::of(Kind::kFieldAccess);
            f.kids.push_back(std::move(e));
            f.kids.push_back(take());
            f.kids.push_back(take());
            e = std::move(f);
          }
        } else if (next->text == "class") {
          Node c = Node::of(Kind::kClassLit);
          c.kids.push_back(as_type(std::move(e)));
          c.kids.push_back(take());
          c.kids.push_back(take());
          e = std::move(c);
        } else if (next->text == "this" || next->text == "super") {
          Node f = Node::of(Kind::kFieldAccess);
          f.kids.push_back(std::move(e));
          f.kids.push_back(take());
          f.kids.push_back(take());
          if (f.kids.back().text == "super" && at("(")) {
            fail("qualified superclass constructor calls are unsupported");
          }
          e = std::move(f);
        } else if (next->text == "new") {
          fail("qualified instance creation is unsupported");
        } else {
          fail("unexpected token after '.'");
        }
      } else if (at("[")) {
        if (peek_is(1, "]")) {
          Node t = as_type(std::move(e));
          while (at("[") && peek_is(1, "]")) {
            t.kids.push_back(take());
            t.kids.push_back(take());
          }
          e = finish_type_primary(std::move(t));
        } else {
          Node ix = Node::of(Kind::kIndex);
          ix.kids.push_back(std::move(e));
          ix.kids.push_back(take());
          ix.kids.push_back(parse_expr());
          ix.kids.push_back(expect("]"));
          e = std::move(ix);
        }
      } else if (at("::")) {
        Node r = Node::of(Kind::kMethodRef);
        r.kids.push_back(std::move(e));
        r.kids.push_back(take());
        if (at("<")) r.kids.push_back(parse_type_args());
        if (at("new")) {
          r.kids.push_back(take());
        } else {
          r.kids.push_back(expect_ident());
        }
        e = std::move(r);
      } else if (at("++") || at("--")) {
        Node p = Node::of(Kind::kPostfix);
        p.kids.push_back(std::move(e));
        p.kids.push_back(take());
        e = std::move(p);
      } else {
        break;
      }
    }
    return e;
  }

  // After a type in expression position: `T.class` or `T::m`.
  Node finish_type_primary(Node type) {
    if (at(".") && peek_is(1, "class")) {
      Node c = Node::of(Kind::kClassLit);
      c.kids.push_back(std::move(type));
      c.kids.push_back(take());
      c.kids.push_back(take());
      return c;
    }
    if (at("::")) {
      Node r = Node::of(Kind::kMethodRef);
      r.kids.push_back(std::move(type));
      r.kids.push_back(take());
      if (at("new")) {
        r.kids.push_back(take());
      } else {
        r.kids.push_back(expect_ident());
      }
      return r;
    }
    fail("expected '.class' or '::' after type");
  }

  Node parse_primary() {
    if (eof()) fail("expected expression");
    const Token& t = toks_[pos_];
    if (t.kind == TokenKind::kLiteral) return Node::of(Kind::kLiteral, {take()});
    if (t.text == "this" || t.text == "super") {
      if (peek_is(1, "(")) {
        Node c = Node::of(Kind::kCall);
        c.kids.push_back(take());
        c.kids.push_back(parse_args());
        return c;
      }
      return Node::of(t.text == "this" ? Kind::kThis : Kind::kSuper, {take()});
    }
    if (t.text == "(") {
      Node p = Node::of(Kind::kParen);
      p.kids.push_back(take());
      p.kids.push_back(parse_expr());
      p.kids.push_back(expect(")"));
      return p;
    }
    if (t.text == "new") return parse_new();
    if (t.kind == TokenKind::kKeyword && (is_primitive(t.text) || t.text == "void")) {
      Node type = Node::of(Kind::kType);
      type.kids.push_back(take());
      while (at("[") && peek_is(1, "]")) {
        type.kids.push_back(take());
        type.kids.push_back(take());
      }
      return finish_type_primary(std::move(type));
    }
    if (t.text == "switch") fail("switch expressions are unsupported");
    if (t.kind == TokenKind::kIdentifier) {
      if (peek_is(1, "(")) {
        Node c = Node::of(Kind::kCall);
        c.kids.push_back(take());
        c.kids.push_back(parse_args());
        return c;
      }
      return Node::of(Kind::kName, {take()});
    }
    fail("expected expression");
  }

  Node parse_new() {
    Node kw = take();
    Node type_args;
    const bool has_type_args = at("<");
    if (has_type_args) type_args = parse_type_args();
    Node type = parse_type(/*with_dims=*/false);
    if (at("[")) {
      Node a = Node::of(Kind::kNewArray);
      a.kids.push_back(std::move(kw));
      a.kids.push_back(std::move(type));
      while (at("[")) {
        a.kids.push_back(take());
        if (at("]")) {
          a.kids.push_back(take());
        } else {
          a.kids.push_back(parse_expr());
          a.kids.push_back(expect("]"));
        }
      }
      if (at("{")) a.kids.push_back(parse_array_init());
      return a;
    }
    Node n = Node::of(Kind::kNew);
    n.kids.push_back(std::move(kw));
    if (has_type_args) n.kids.push_back(std::move(type_args));
    n.kids.push_back(std::move(type));
    n.kids.push_back(parse_args());
    if (at("{")) {
      Node body = Node::of(Kind::kClassBody);
      consume_balanced(body, "{", "}");
      n.kids.push_back(std::move(body));
    }
    return n;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t split_ = 0;
};

// ---- placement of tags and comments -----------------------------------------

struct Located {
  // Lists walked from the method body inwards, with the kid index of the
  // item that was entered at each level. The last entry is the final list;
  // its index is a boundary (insertion position) there.
  std::vector<std::pair<Node*, std::size_t>> steps;
  bool snapped = false;
};

inline bool contains_list_position(const Node& list, std::uint32_t p) {
  return list.begin < p && p <= list.end - 1;
}

inline Node* find_inner_list(Node& n, std::uint32_t p) {
  for (Node& c : n.kids) {
    if (c.is_leaf() || c.is_marker()) continue;
    if (is_statement_list(c.kind)) {
      if (contains_list_position(c, p)) return &c;
      continue;
    }
    if (Node* found = find_inner_list(c, p)) return found;
  }
  return nullptr;
}

/// Finds where core position `p` sits. For a start tag a snap goes before the
/// enclosing item, for an end tag after it.
inline Located locate(Node& list, std::uint32_t p, bool is_start) {
  Located loc;
  Node* cur = &list;
  while (true) {
    const std::size_t last = cur->kids.size() - 1;
    std::size_t boundary = last;
    Node* inner = nullptr;
    std::size_t item_index = 0;
    for (std::size_t k = 1; k < last; ++k) {
      Node& item = cur->kids[k];
      if (item.is_marker()) continue;
      if (p <= item.begin) {
        boundary = k;
        break;
      }
      if (p < item.end) {
        item_index = k;
        inner = find_inner_list(item, p);
        if (!inner) {
          loc.snapped = true;
          boundary = is_start ? k : k + 1;
        } else {
          boundary = SIZE_MAX;
        }
        break;
      }
    }
    if (boundary != SIZE_MAX) {
      loc.steps.emplace_back(cur, boundary);
      return loc;
    }
    loc.steps.emplace_back(cur, item_index);
    cur = inner;
  }
}

struct TagPosition {
  std::string text;
  std::uint32_t core_pos = 0;
  std::size_t offset = 0;
};

inline void place_comment(Node& body, const TagPosition& c) {
  if (c.core_pos <= body.begin || c.core_pos > body.end - 1) return;
  Located loc = locate(body, c.core_pos, true);
  if (loc.snapped) return;
  auto [list, boundary] = loc.steps.back();
  if (boundary < list->kids.size() - 1) {
    list->kids[boundary].trivia.push_back(c.text);
  } else {
    list->trailing.push_back(c.text);
  }
}

inline void place_tags(Node& body, const TagPosition& start,
                       const TagPosition& end,
                       std::vector<SnapAdjustment>& adjustments) {
  auto locate_tag = [&](const TagPosition& t, bool is_start) {
    if (t.core_pos <= body.begin) {
      Located loc;
      loc.steps.emplace_back(&body, 1);
      loc.snapped = true;
      return loc;
    }
    if (t.core_pos > body.end - 1) {
      Located loc;
      loc.steps.emplace_back(&body, body.kids.size() - 1);
      loc.snapped = true;
      return loc;
    }
    return locate(body, t.core_pos, is_start);
  };
  Located s = locate_tag(start, true);
  Located e = locate_tag(end, false);
  if (s.snapped) {
    adjustments.push_back({start.text, start.offset, "tag inside a statement"});
  }
  if (e.snapped) {
    adjustments.push_back({end.text, end.offset, "tag inside a statement"});
  }
  std::size_t level = 0;
  while (level + 1 < s.steps.size() && level + 1 < e.steps.size() &&
         s.steps[level + 1].first == e.steps[level + 1].first) {
    ++level;
  }
  Node* list = s.steps[level].first;
  std::size_t sb = s.steps[level].second;
  std::size_t eb = e.steps[level].second;
  const bool s_deeper = level + 1 < s.steps.size();
  const bool e_deeper = level + 1 < e.steps.size();
  if (e_deeper) {
    eb = e.steps[level].second + 1;
    adjustments.push_back({end.text, end.offset, "lifted to the start tag's statement list"});
  }
  if (s_deeper) {
    adjustments.push_back({start.text, start.offset, "lifted to the end tag's statement list"});
  }
  list->kids.insert(list->kids.begin() + static_cast<std::ptrdiff_t>(eb),
                    Node::marker(kEndTag));
  list->kids.insert(list->kids.begin() + static_cast<std::ptrdiff_t>(sb),
                    Node::marker(kStartTag));
}

inline void assign_statement_ids(Node& root) {
  std::uint32_t next = 1;
  visit_mut(root, [&](Node& n) {
    if (is_statement(n.kind)) n.id = next++;
  });
}

}  // namespace detail

/// Parses one Java method declaration. Tags are validated per `opts.tags`.
inline ParsedMethod parse_method(std::string_view source, ParseOptions opts = {}) {
  const TokenStream all = tokenize(source, LexOptions{.keep_comments = true});
  std::vector<Token> core;
  std::vector<detail::TagPosition> tags;
  std::vector<detail::TagPosition> comments;
  for (const Token& t : all) {
    const auto pos = static_cast<std::uint32_t>(core.size());
    if (t.kind == TokenKind::kTag) {
      tags.push_back({t.text, pos, t.offset});
    } else if (t.kind == TokenKind::kComment) {
      comments.push_back({t.text, pos, t.offset});
    } else {
      core.push_back(t);
    }
  }

  const bool has_tags = !tags.empty();
  if (opts.tags == TagPolicy::kForbidden && has_tags) {
    throw Error(ErrorCode::kMalformedTags, "tags are not allowed here");
  }
  if (opts.tags == TagPolicy::kRequired || has_tags) {
    const bool ok = tags.size() == 2 && tags[0].text == kStartTag &&
                    tags[1].text == kEndTag;
    if (!ok) {
      throw Error(ErrorCode::kMalformedTags,
                  "expected exactly one <START> followed by one <END>, found " +
                      std::to_string(tags.size()) + " tag(s)");
    }
  }

  ParsedMethod out;
  out.ast.root = detail::Parser(std::move(core)).parse_method_decl();
  Node& body = out.ast.body();
  for (const auto& c : comments) detail::place_comment(body, c);
  if (has_tags) detail::place_tags(body, tags[0], tags[1], out.adjustments);
  detail::assign_statement_ids(out.ast.root);
  if (has_tags) out.span = tagged_span(out.ast);
  return out;
}

}  // namespace acrc::java
