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

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "acrc/error.hpp"
#include "acrc/lexer.hpp"

namespace acrc::java {

/// Node kinds of the concrete syntax tree. Every token of the method is a
/// leaf, so printing a tree in order reproduces its token stream exactly.
enum class Kind : std::uint8_t {
  kLeaf,
  // declaration header
  kMethod,
  kModifiers,
  kAnnotation,
  kTypeParams,
  kTypeArgs,
  kType,
  kParams,
  kParam,
  kThrows,
  // statements
  kBlock,
  kSwitchBody,
  kLocalVar,
  kDeclarator,
  kExprStmt,
  kIf,
  kWhile,
  kDo,
  kFor,
  kForInit,
  kForCond,
  kForUpdate,
  kForEach,
  kForVar,
  kTry,
  kResources,
  kResource,
  kCatch,
  kCatchParam,
  kFinally,
  kReturn,
  kThrow,
  kBreak,
  kContinue,
  kEmpty,
  kLabeled,
  kSwitch,
  kCaseLabel,
  kSync,
  kAssert,
  kMarker,
  // expressions
  kName,
  kLiteral,
  kThis,
  kSuper,
  kParen,
  kFieldAccess,
  kCall,
  kArgs,
  kIndex,
  kNew,
  kNewArray,
  kArrayInit,
  kCast,
  kUnary,
  kPostfix,
  kBinary,
  kTernary,
  kAssign,
  kInstanceOf,
  kLambda,
  kMethodRef,
  kClassLit,
  kClassBody,
};

std::string_view kind_name(Kind kind);

struct Node {
  Kind kind = Kind::kLeaf;
  // Leaf payload.
  TokenKind token_kind = TokenKind::kOperator;
  std::string text;
  bool glue_right = false;  // first half of a split `>>`; prints unspaced

  std::vector<Node> kids;
  std::vector<std::string> trivia;    // comments printed before a statement
  std::vector<std::string> trailing;  // block comments after the last item

  std::uint32_t id = 0;     // statement id, assigned after parsing
  std::uint32_t begin = 0;  // core-token range from parsing
  std::uint32_t end = 0;
  int symbol = -1;          // resolved local variable, see resolve.hpp
  bool perturbed = false;   // created or modified by a perturbation

  static Node leaf(TokenKind tk, std::string text) {
    Node n;
    n.kind = Kind::kLeaf;
    n.token_kind = tk;
    n.text = std::move(text);
    return n;
  }
  static Node leaf(const Token& t) { return leaf(t.kind, t.text); }
  static Node keyword(std::string text) {
    return leaf(TokenKind::kKeyword, std::move(text));
  }
  static Node ident(std::string text) {
    return leaf(TokenKind::kIdentifier, std::move(text));
  }
  static Node sep(std::string text) {
    return leaf(TokenKind::kSeparator, std::move(text));
  }
  static Node op(std::string text) {
    return leaf(TokenKind::kOperator, std::move(text));
  }
  static Node of(Kind kind, std::vector<Node> kids = {}) {
    Node n;
    n.kind = kind;
    n.kids = std::move(kids);
    return n;
  }
  static Node marker(std::string_view tag) {
    Node n;
    n.kind = Kind::kMarker;
    n.token_kind = TokenKind::kTag;
    n.text = std::string(tag);
    return n;
  }

  bool is_leaf() const { return kind == Kind::kLeaf; }
  bool is_leaf(std::string_view t) const { return is_leaf() && text == t; }
  bool is_marker() const { return kind == Kind::kMarker; }
  bool is_start_marker() const { return is_marker() && text == kStartTag; }
  bool is_end_marker() const { return is_marker() && text == kEndTag; }

  const Node* find(Kind k) const {
    for (const Node& c : kids) {
      if (c.kind == k) return &c;
    }
    return nullptr;
  }
  Node* find(Kind k) {
    for (Node& c : kids) {
      if (c.kind == k) return &c;
    }
    return nullptr;
  }
};

/// True for node kinds that live in a statement list.
inline bool is_statement(Kind k) {
  switch (k) {
    case Kind::kBlock:
    case Kind::kLocalVar:
    case Kind::kExprStmt:
    case Kind::kIf:
    case Kind::kWhile:
    case Kind::kDo:
    case Kind::kFor:
    case Kind::kForEach:
    case Kind::kTry:
    case Kind::kReturn:
    case Kind::kThrow:
    case Kind::kBreak:
    case Kind::kContinue:
    case Kind::kEmpty:
    case Kind::kLabeled:
    case Kind::kSwitch:
    case Kind::kCaseLabel:
    case Kind::kSync:
    case Kind::kAssert:
    case Kind::kMarker:
      return true;
    default:
      return false;
  }
}

inline bool is_statement_list(Kind k) {
  return k == Kind::kBlock || k == Kind::kSwitchBody;
}

/// Items of a block or switch body, i.e. the children between the braces.
/// Blocks always store `{` first and `}` last.
inline std::pair<std::size_t, std::size_t> list_item_range(const Node& list) {
  return {1, list.kids.size() - 1};
}

/// A parsed method declaration.
struct MethodAst {
  Node root;  // Kind::kMethod

  const Node& body() const { return *root.find(Kind::kBlock); }
  Node& body() { return *root.find(Kind::kBlock); }
  const Node* return_type() const { return root.find(Kind::kType); }
  bool is_constructor() const { return return_type() == nullptr; }
  const Node& params() const { return *root.find(Kind::kParams); }
  std::string name() const {
    for (const Node& k : root.kids) {
      if (k.is_leaf() && k.token_kind == TokenKind::kIdentifier) return k.text;
    }
    return {};
  }
};

inline void visit(const Node& n, const std::function<void(const Node&)>& fn) {
  fn(n);
  for (const Node& c : n.kids) visit(c, fn);
}

inline void visit_mut(Node& n, const std::function<void(Node&)>& fn) {
  fn(n);
  for (Node& c : n.kids) visit_mut(c, fn);
}

/// Leaves in print order (markers included).
inline void collect_leaves(const Node& n, std::vector<const Node*>& out) {
  if (n.is_leaf() || n.is_marker()) {
    out.push_back(&n);
    return;
  }
  for (const Node& c : n.kids) collect_leaves(c, out);
}

/// Structural equality: kinds, leaf kinds and texts. Bookkeeping fields
/// (ids, ranges, symbols, perturbation flags, comments) are ignored.
inline bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.kids.size() != b.kids.size()) return false;
  if (a.is_leaf() || a.is_marker()) {
    if (a.text != b.text || a.token_kind != b.token_kind) return false;
  }
  for (std::size_t i = 0; i < a.kids.size(); ++i) {
    if (!structurally_equal(a.kids[i], b.kids[i])) return false;
  }
  return true;
}

inline std::string_view kind_name(Kind kind) {
  switch (kind) {
    case Kind::kLeaf: return "leaf";
    case Kind::kMethod: return "method";
    case Kind::kModifiers: return "modifiers";
    case Kind::kAnnotation: return "annotation";
    case Kind::kTypeParams: return "type_params";
    case Kind::kTypeArgs: return "type_args";
    case Kind::kType: return "type";
    case Kind::kParams: return "params";
    case Kind::kParam: return "param";
    case Kind::kThrows: return "throws";
    case Kind::kBlock: return "block";
    case Kind::kSwitchBody: return "switch_body";
    case Kind::kLocalVar: return "local_var";
    case Kind::kDeclarator: return "declarator";
    case Kind::kExprStmt: return "expr_stmt";
    case Kind::kIf: return "if";
    case Kind::kWhile: return "while";
    case Kind::kDo: return "do";
    case Kind::kFor: return "for";
    case Kind::kForInit: return "for_init";
    case Kind::kForCond: return "for_cond";
    case Kind::kForUpdate: return "for_update";
    case Kind::kForEach: return "for_each";
    case Kind::kForVar: return "for_var";
    case Kind::kTry: return "try";
    case Kind::kResources: return "resources";
    case Kind::kResource: return "resource";
    case Kind::kCatch: return "catch";
    case Kind::kCatchParam: return "catch_param";
    case Kind::kFinally: return "finally";
    case Kind::kReturn: return "return";
    case Kind::kThrow: return "throw";
    case Kind::kBreak: return "break";
    case Kind::kContinue: return "continue";
    case Kind::kEmpty: return "empty";
    case Kind::kLabeled: return "labeled";
    case Kind::kSwitch: return "switch";
    case Kind::kCaseLabel: return "case_label";
    case Kind::kSync: return "synchronized";
    case Kind::kAssert: return "assert";
    case Kind::kMarker: return "marker";
    case Kind::kName: return "name";
    case Kind::kLiteral: return "literal";
    case Kind::kThis: return "this";
    case Kind::kSuper: return "super";
    case Kind::kParen: return "paren";
    case Kind::kFieldAccess: return "field_access";
    case Kind::kCall: return "call";
    case Kind::kArgs: return "args";
    case Kind::kIndex: return "index";
    case Kind::kNew: return "new";
    case Kind::kNewArray: return "new_array";
    case Kind::kArrayInit: return "array_init";
    case Kind::kCast: return "cast";
    case Kind::kUnary: return "unary";
    case Kind::kPostfix: return "postfix";
    case Kind::kBinary: return "binary";
    case Kind::kTernary: return "ternary";
    case Kind::kAssign: return "assign";
    case Kind::kInstanceOf: return "instanceof";
    case Kind::kLambda: return "lambda";
    case Kind::kMethodRef: return "method_ref";
    case Kind::kClassLit: return "class_literal";
    case Kind::kClassBody: return "class_body";
  }
  return "?";
}

}  // namespace acrc::java
