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

/// @file operators.hpp
/// @brief The nine tree rewrites.
///
/// Each operator has a structural check and a transform. The transform runs
/// first on the original method, recording its choices (names, the swapped
/// pair) in a Plan, and then on the revision, replaying the Plan. Nodes that
/// an operator creates or modifies are flagged `perturbed`.

#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "acrc/error.hpp"
#include "acrc/java/ast.hpp"
#include "acrc/java/resolve.hpp"
#include "acrc/spp/naming.hpp"
#include "acrc/spp/types.hpp"

namespace acrc::spp {

struct Plan {
  std::string name;                                         // p2 p3 p4 p6
  std::string pair_texts;                                   // p5
  std::map<std::pair<std::string, int>, std::string> copies;  // p7
  std::map<std::string, std::string> rename;                // p8 p9
};

struct Side {
  java::MethodAst& ast;
  java::Resolution res;
  bool revision = false;
};

namespace ops {

using java::Kind;
using java::Node;

// ---- node builders ----------------------------------------------------------

inline Node name_expr(const std::string& n) {
  return Node::of(Kind::kName, {Node::ident(n)});
}

inline Node literal(const std::string& t) {
  return Node::of(Kind::kLiteral, {Node::leaf(TokenKind::kLiteral, t)});
}

inline Node simple_type(const std::string& t) {
  return Node::of(Kind::kType, {is_java_keyword(t) ? Node::keyword(t) : Node::ident(t)});
}

inline Node local_var(Node type, const std::string& name, Node init) {
  Node d = Node::of(Kind::kDeclarator, {Node::ident(name), Node::op("="), std::move(init)});
  return Node::of(Kind::kLocalVar,
                  {Node::of(Kind::kModifiers), std::move(type), std::move(d), Node::sep(";")});
}

inline Node block(std::vector<Node> items) {
  Node b = Node::of(Kind::kBlock);
  b.kids.push_back(Node::sep("{"));
  for (Node& i : items) b.kids.push_back(std::move(i));
  b.kids.push_back(Node::sep("}"));
  return b;
}

inline Node flagged(Node n) {
  n.perturbed = true;
  return n;
}

// `boolean v = false; if (v) { <branch> }`, both flagged.
inline std::vector<Node> dead_guard(const std::string& v, Node branch) {
  std::vector<Node> out;
  out.push_back(flagged(local_var(simple_type("boolean"), v, literal("false"))));
  Node guard = Node::of(Kind::kIf, {Node::keyword("if"), Node::sep("("), name_expr(v),
                                    Node::sep(")"), block({std::move(branch)})});
  out.push_back(flagged(std::move(guard)));
  return out;
}

// ---- queries ----------------------------------------------------------------

inline bool is_explicit_ctor_call(const Node& s) {
  if (s.kind != Kind::kExprStmt) return false;
  const Node& e = s.kids.front();
  return e.kind == Kind::kCall && e.kids.front().is_leaf() &&
         (e.kids.front().text == "this" || e.kids.front().text == "super");
}

// Kid indices of the non-marker items of a statement list.
inline std::vector<std::size_t> real_items(const Node& list) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < list.kids.size(); ++i) {
    if (!list.kids[i].is_marker()) out.push_back(i);
  }
  return out;
}

inline bool any_node(const Node& n, const std::function<bool(const Node&)>& pred) {
  if (pred(n)) return true;
  for (const Node& k : n.kids) {
    if (any_node(k, pred)) return true;
  }
  return false;
}

inline std::string leaf_texts(const Node& n) {
  std::vector<const Node*> leaves;
  java::collect_leaves(n, leaves);
  std::string out;
  for (const Node* l : leaves) {
    if (!out.empty()) out += ' ';
    out += l->text;
  }
  return out;
}

inline std::set<std::string> identifiers(const Node& root) {
  std::set<std::string> out;
  java::visit(root, [&](const Node& k) {
    if (k.is_leaf() && k.token_kind == TokenKind::kIdentifier) out.insert(k.text);
  });
  return out;
}

inline void rename_symbol(Node& n, int symbol, const std::string& to) {
  java::visit_mut(n, [&](Node& k) {
    if (k.is_leaf() && k.symbol == symbol) {
      k.text = to;
      k.perturbed = true;
    }
  });
}

// ---- p1 -----------------------------------------------------------------------

inline bool is_if_else(const Node& n) { return n.kind == Kind::kIf && n.kids.size() > 5; }

inline bool is_comparison(const std::string& op) {
  return op == "==" || op == "!=" || op == "<" || op == ">" || op == "<=" || op == ">=";
}

inline std::string flip_comparison(const std::string& op) {
  if (op == "==") return "!=";
  if (op == "!=") return "==";
  if (op == "<") return ">=";
  if (op == ">=") return "<";
  if (op == ">") return "<=";
  return ">";
}

inline bool is_primary(Kind k) {
  return k == Kind::kName || k == Kind::kLiteral || k == Kind::kThis || k == Kind::kParen ||
         k == Kind::kFieldAccess || k == Kind::kCall || k == Kind::kIndex;
}

inline Node negate(Node e) {
  if (e.kind == Kind::kUnary && e.kids.front().is_leaf("!")) return std::move(e.kids[1]);
  if (e.kind == Kind::kBinary && is_comparison(e.kids[1].text)) {
    e.kids[1].text = flip_comparison(e.kids[1].text);
    return e;
  }
  if (is_primary(e.kind)) return Node::of(Kind::kUnary, {Node::op("!"), std::move(e)});
  Node paren = Node::of(Kind::kParen, {Node::sep("("), std::move(e), Node::sep(")")});
  return Node::of(Kind::kUnary, {Node::op("!"), std::move(paren)});
}

// True when an `else` printed after `s` would bind inside it.
inline bool ends_with_open_if(const Node& s) {
  switch (s.kind) {
    case Kind::kIf:
      return s.kids.size() <= 5 || ends_with_open_if(s.kids[6]);
    case Kind::kWhile:
    case Kind::kFor:
    case Kind::kForEach:
    case Kind::kLabeled:
      return ends_with_open_if(s.kids.back());
    default:
      return false;
  }
}

inline void swap_if_else(Node& n) {
  for (Node& k : n.kids) swap_if_else(k);
  if (!is_if_else(n)) return;
  n.kids[2] = negate(std::move(n.kids[2]));
  Node then_branch = std::move(n.kids[6]);
  if (ends_with_open_if(then_branch)) then_branch = block({std::move(then_branch)});
  n.kids[6] = std::move(n.kids[4]);
  n.kids[4] = std::move(then_branch);
  n.perturbed = true;
}

// ---- p4 -----------------------------------------------------------------------

inline Reason check_try_wrap(const java::MethodAst& ast) {
  const Node& body = ast.body();
  const auto items = real_items(body);
  if (items.empty()) return Reason::kEmptyBody;
  if (items.size() == 1 && body.kids[items[0]].kind == Kind::kTry) return Reason::kAlreadyWrapped;
  if (is_explicit_ctor_call(body.kids[items[0]])) return Reason::kConstructorCall;
  return Reason::kOk;
}

inline void wrap_try(java::MethodAst& ast, const std::string& e) {
  Node& body = ast.body();
  Node inner = Node::of(Kind::kBlock);
  inner.kids.push_back(flagged(Node::sep("{")));
  for (std::size_t i = 1; i + 1 < body.kids.size(); ++i) {
    inner.kids.push_back(std::move(body.kids[i]));
  }
  inner.kids.push_back(flagged(Node::sep("}")));
  inner.trailing = std::move(body.trailing);
  body.trailing.clear();

  Node param = Node::of(Kind::kCatchParam,
                        {Node::of(Kind::kModifiers), simple_type("Exception"), Node::ident(e)});
  Node rethrow = Node::of(Kind::kThrow, {Node::keyword("throw"), name_expr(e), Node::sep(";")});
  Node handler = Node::of(Kind::kCatch, {Node::keyword("catch"), Node::sep("("), std::move(param),
                                          Node::sep(")"), block({std::move(rethrow)})});
  Node t = Node::of(Kind::kTry, {flagged(Node::keyword("try")), std::move(inner),
                                 flagged(std::move(handler))});
  Node close = std::move(body.kids.back());
  Node open = std::move(body.kids.front());
  body.kids.clear();
  body.kids.push_back(std::move(open));
  body.kids.push_back(std::move(t));
  body.kids.push_back(std::move(close));
}

// ---- p5 -----------------------------------------------------------------------

struct Effects {
  bool ok = false;
  std::set<int> reads;
  std::set<int> writes;
};

// Collects reads; false if the expression calls, allocates, or writes.
inline bool pure_reads(const Node& e, std::set<int>& reads) {
  switch (e.kind) {
    case Kind::kCall:
    case Kind::kNew:
    case Kind::kNewArray:
    case Kind::kLambda:
    case Kind::kMethodRef:
    case Kind::kClassBody:
    case Kind::kAssign:
    case Kind::kPostfix:
      return false;
    case Kind::kUnary:
      if (e.kids.front().is_leaf("++") || e.kids.front().is_leaf("--")) return false;
      break;
    case Kind::kName:
      if (e.kids.front().symbol >= 0) reads.insert(e.kids.front().symbol);
      return true;
    default:
      break;
  }
  for (const Node& k : e.kids) {
    if (!pure_reads(k, reads)) return false;
  }
  return true;
}

inline Effects effects(const Node& s) {
  Effects fx;
  if (s.kind == Kind::kLocalVar) {
    for (const Node& d : s.kids) {
      if (d.kind != Kind::kDeclarator) continue;
      fx.writes.insert(d.kids.front().symbol);
      for (std::size_t i = 1; i < d.kids.size(); ++i) {
        if (!pure_reads(d.kids[i], fx.reads)) return fx;
      }
    }
    fx.ok = true;
    return fx;
  }
  if (s.kind == Kind::kExprStmt && s.kids.front().kind == Kind::kAssign) {
    const Node& a = s.kids.front();
    const Node& lhs = a.kids[0];
    if (lhs.kind != Kind::kName || lhs.kids.front().symbol < 0) return fx;
    const int sym = lhs.kids.front().symbol;
    fx.writes.insert(sym);
    if (a.kids[1].text != "=") fx.reads.insert(sym);
    if (!pure_reads(a.kids[2], fx.reads)) return fx;
    fx.ok = true;
  }
  return fx;
}

inline bool intersects(const std::set<int>& a, const std::set<int>& b) {
  return std::any_of(a.begin(), a.end(), [&](int x) { return b.count(x) > 0; });
}

inline bool independent_pair(const Node& first, const Node& second) {
  const Effects a = effects(first);
  if (!a.ok) return false;
  const Effects b = effects(second);
  if (!b.ok) return false;
  return !intersects(b.reads, a.writes) && !intersects(b.writes, a.writes) &&
         !intersects(a.reads, b.writes);
}

using PairVisitor = std::function<bool(Node& list, std::size_t i)>;

// Visits adjacent item pairs in document order until `fn` accepts one.
inline bool find_pair(Node& n, const PairVisitor& fn) {
  if (java::is_statement_list(n.kind)) {
    for (std::size_t i = 1; i + 1 < n.kids.size(); ++i) {
      const bool pair = i + 2 < n.kids.size() && !n.kids[i].is_marker() &&
                        !n.kids[i + 1].is_marker();
      if (pair && independent_pair(n.kids[i], n.kids[i + 1]) && fn(n, i)) return true;
      if (find_pair(n.kids[i], fn)) return true;
    }
    return false;
  }
  for (Node& k : n.kids) {
    if (find_pair(k, fn)) return true;
  }
  return false;
}

inline void swap_items(Node& list, std::size_t i) {
  std::swap(list.kids[i], list.kids[i + 1]);
  std::swap(list.kids[i].trivia, list.kids[i + 1].trivia);
  list.kids[i].perturbed = true;
  list.kids[i + 1].perturbed = true;
}

// ---- p6 -----------------------------------------------------------------------

inline bool is_value_return(const Node& n) {
  return n.kind == Kind::kReturn && n.kids.size() == 3;
}

inline Reason check_return_via_variable(const java::MethodAst& ast) {
  if (ast.is_constructor()) return Reason::kConstructor;
  const Node& type = *ast.return_type();
  if (type.kids.front().is_leaf("void")) return Reason::kVoidReturn;
  if (type.kids.front().is_leaf("Runnable") ||
      any_node(type, [](const Node& k) { return k.is_leaf("Void"); })) {
    return Reason::kRunnableReturn;
  }
  if (!any_node(ast.body(), is_value_return)) return Reason::kNoReturnValue;
  return Reason::kOk;
}

inline std::pair<Node, Node> split_return(Node ret, const Node& type, const std::string& v) {
  Node type_copy = type;
  type_copy.perturbed = true;
  Node decl = local_var(std::move(type_copy), v, std::move(ret.kids[1]));
  decl.kids[0].perturbed = true;
  decl.kids[2].kids[0].perturbed = true;
  decl.kids[2].kids[1].perturbed = true;
  decl.kids[3].perturbed = true;
  decl.trivia = std::move(ret.trivia);
  Node out = Node::of(Kind::kReturn, {Node::keyword("return"), name_expr(v), Node::sep(";")});
  return {std::move(decl), flagged(std::move(out))};
}

inline void rewrite_returns(Node& n, const Node& type, const std::string& v) {
  if (n.kind == Kind::kBlock) {
    for (std::size_t i = 1; i + 1 < n.kids.size(); ++i) {
      if (is_value_return(n.kids[i])) {
        auto [decl, ret] = split_return(std::move(n.kids[i]), type, v);
        n.kids[i] = std::move(decl);
        n.kids.insert(n.kids.begin() + static_cast<std::ptrdiff_t>(i) + 1, std::move(ret));
        ++i;
      } else {
        rewrite_returns(n.kids[i], type, v);
      }
    }
    return;
  }
  for (Node& k : n.kids) {
    if (is_value_return(k)) {
      std::vector<std::string> trivia = std::move(k.trivia);
      auto [decl, ret] = split_return(std::move(k), type, v);
      std::vector<Node> items;
      items.push_back(std::move(decl));
      items.push_back(std::move(ret));
      k = block(std::move(items));
      k.kids.front().perturbed = true;
      k.kids.back().perturbed = true;
      k.trivia = std::move(trivia);
    } else {
      rewrite_returns(k, type, v);
    }
  }
}

// ---- p7 -----------------------------------------------------------------------

inline bool has_initializer(const Node& declarator) { return declarator.kids.size() >= 3 &&
                                                             declarator.kids[declarator.kids.size() - 2].is_leaf("="); }

inline bool is_initialized_local(const Node& s) {
  if (s.kind != Kind::kLocalVar) return false;
  return std::any_of(s.kids.begin(), s.kids.end(), [](const Node& d) {
    return d.kind == Kind::kDeclarator && has_initializer(d);
  });
}

inline bool has_list_level_definition(const Node& n) {
  if (java::is_statement_list(n.kind)) {
    for (std::size_t i = 1; i + 1 < n.kids.size(); ++i) {
      if (is_initialized_local(n.kids[i]) || has_list_level_definition(n.kids[i])) return true;
    }
    return false;
  }
  return std::any_of(n.kids.begin(), n.kids.end(), has_list_level_definition);
}

struct CopyNamer {
  Plan& plan;
  NameGenerator& gen;
  bool revision;
  std::map<std::string, int> seen;

  std::string operator()(const std::string& original) {
    const std::pair<std::string, int> key{original, seen[original]++};
    auto it = plan.copies.find(key);
    if (it != plan.copies.end()) return it->second;
    std::string fresh = gen.fresh();
    if (!revision) plan.copies.emplace(key, fresh);
    return fresh;
  }
};

inline void break_chains(Node& n, CopyNamer& namer) {
  if (!java::is_statement_list(n.kind)) {
    for (Node& k : n.kids) break_chains(k, namer);
    return;
  }
  for (std::size_t i = 1; i + 1 < n.kids.size(); ++i) {
    if (!is_initialized_local(n.kids[i])) {
      break_chains(n.kids[i], namer);
      continue;
    }
    std::vector<Node> copies;
    const Node& decl_stmt = n.kids[i];
    const Node& base_type = decl_stmt.kids[1];
    for (const Node& d : decl_stmt.kids) {
      if (d.kind != Kind::kDeclarator || !has_initializer(d)) continue;
      const Node& name = d.kids.front();
      const std::string fresh = namer(name.text);
      Node type = base_type;
      for (std::size_t k = 1; k < d.kids.size() && !d.kids[k].is_leaf("="); ++k) {
        type.kids.push_back(d.kids[k]);
      }
      copies.push_back(flagged(local_var(std::move(type), fresh, name_expr(name.text))));
      for (std::size_t j = i + 1; j + 1 < n.kids.size(); ++j) {
        rename_symbol(n.kids[j], name.symbol, fresh);
      }
    }
    const std::size_t count = copies.size();
    n.kids.insert(n.kids.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                  std::make_move_iterator(copies.begin()), std::make_move_iterator(copies.end()));
    i += count;
  }
}

// ---- p8 / p9 ------------------------------------------------------------------

// Distinct local and parameter names in declaration order.
inline std::vector<std::string> local_name_pool(const java::Resolution& res) {
  std::vector<std::string> out;
  for (const java::Symbol& s : res.symbols) {
    if (std::find(out.begin(), out.end(), s.name) == out.end()) out.push_back(s.name);
  }
  return out;
}

inline bool captures(const java::Resolution& res, const std::map<std::string, std::string>& rename) {
  for (const auto& [from, to] : rename) {
    if (res.unresolved.count(from) || res.unresolved.count(to)) return true;
  }
  return false;
}

inline void apply_rename(Node& root, const std::map<std::string, std::string>& rename) {
  java::visit_mut(root, [&](Node& k) {
    if (!k.is_leaf() || k.symbol < 0) return;
    auto it = rename.find(k.text);
    if (it == rename.end()) return;
    k.text = it->second;
    k.perturbed = true;
  });
}

}  // namespace ops

/// Structural precondition of `p` on one side.
inline Reason check(PType p, const Side& side) {
  const java::MethodAst& ast = side.ast;
  switch (p) {
    case PType::kIfElseSwap:
      return ops::any_node(ast.body(), ops::is_if_else) ? Reason::kOk : Reason::kNoIfElse;
    case PType::kDeadException:
    case PType::kDeadAssignment:
      return Reason::kOk;
    case PType::kTryCatchWrap:
      return ops::check_try_wrap(ast);
    case PType::kIndependentSwap: {
      java::Node probe = ast.body();
      const bool found = ops::find_pair(probe, [](java::Node&, std::size_t) { return true; });
      return found ? Reason::kOk : Reason::kNoIndependentPair;
    }
    case PType::kReturnViaVariable:
      return ops::check_return_via_variable(ast);
    case PType::kDefUseBreak:
      return ops::has_list_level_definition(ast.body()) ? Reason::kOk
                                                        : Reason::kNoLocalDefinition;
    case PType::kRandomNames:
      if (side.revision) return Reason::kOk;
      return side.res.symbols.empty() ? Reason::kNoVariables : Reason::kOk;
    case PType::kShuffleNames: {
      if (side.revision) return Reason::kOk;
      const auto pool = ops::local_name_pool(side.res);
      if (pool.size() < 2) return Reason::kNeedsTwoVariables;
      for (const std::string& n : pool) {
        if (side.res.unresolved.count(n)) return Reason::kNameCapture;
      }
      return Reason::kOk;
    }
  }
  return Reason::kOk;
}

/// Rewrites one side. On the original side the choices are recorded in
/// `plan`; on the revision side they are replayed.
inline void transform(PType p, Side& side, Plan& plan, NameGenerator& gen) {
  java::MethodAst& ast = side.ast;
  java::Node& body = ast.body();
  switch (p) {
    case PType::kIfElseSwap:
      ops::swap_if_else(body);
      return;
    case PType::kDeadException:
    case PType::kDeadAssignment: {
      if (!side.revision) plan.name = gen.prefer("var", ops::identifiers(ast.root));
      java::Node branch =
          p == PType::kDeadException
              ? java::Node::of(java::Kind::kThrow,
                               {java::Node::keyword("throw"),
                                java::Node::of(java::Kind::kNew,
                                               {java::Node::keyword("new"),
                                                ops::simple_type("RuntimeException"),
                                                java::Node::of(java::Kind::kArgs,
                                                               {java::Node::sep("("),
                                                                java::Node::sep(")")})}),
                                java::Node::sep(";")})
              : java::Node::of(java::Kind::kExprStmt,
                               {java::Node::of(java::Kind::kAssign,
                                               {ops::name_expr(plan.name), java::Node::op("="),
                                                ops::literal("true")}),
                                java::Node::sep(";")});
      std::size_t at = 1;
      const auto items = ops::real_items(body);
      if (!items.empty() && ops::is_explicit_ctor_call(body.kids[items[0]])) at = items[0] + 1;
      auto guard = ops::dead_guard(plan.name, std::move(branch));
      body.kids.insert(body.kids.begin() + static_cast<std::ptrdiff_t>(at),
                       std::make_move_iterator(guard.begin()),
                       std::make_move_iterator(guard.end()));
      return;
    }
    case PType::kTryCatchWrap:
      if (!side.revision) plan.name = gen.prefer("e", ops::identifiers(ast.root));
      ops::wrap_try(ast, plan.name);
      return;
    case PType::kIndependentSwap: {
      const bool done = ops::find_pair(body, [&](java::Node& list, std::size_t i) {
        const std::string texts =
            ops::leaf_texts(list.kids[i]) + " | " + ops::leaf_texts(list.kids[i + 1]);
        if (side.revision && texts != plan.pair_texts) return false;
        plan.pair_texts = texts;
        ops::swap_items(list, i);
        return true;
      });
      if (!done) throw Error(ErrorCode::kPairingFailure, "swapped pair not found in revision");
      return;
    }
    case PType::kReturnViaVariable: {
      if (!side.revision) plan.name = gen.prefer("retVal", ops::identifiers(ast.root));
      const java::Node type = *ast.return_type();
      ops::rewrite_returns(body, type, plan.name);
      return;
    }
    case PType::kDefUseBreak: {
      ops::CopyNamer namer{plan, gen, side.revision, {}};
      ops::break_chains(body, namer);
      return;
    }
    case PType::kRandomNames:
      if (!side.revision) {
        for (const std::string& n : ops::local_name_pool(side.res)) plan.rename[n] = gen.fresh();
      }
      ops::apply_rename(ast.root, plan.rename);
      return;
    case PType::kShuffleNames: {
      if (!side.revision) {
        const auto pool = ops::local_name_pool(side.res);
        std::vector<std::string> image = pool;
        for (std::size_t i = image.size() - 1; i > 0; --i) {  // Sattolo: one cycle
          std::swap(image[i], image[gen.below(i)]);
        }
        for (std::size_t i = 0; i < pool.size(); ++i) plan.rename[pool[i]] = image[i];
      } else if (ops::captures(side.res, plan.rename)) {
        throw Error(ErrorCode::kPairingFailure, "shuffled name captured in revision");
      }
      ops::apply_rename(ast.root, plan.rename);
      return;
    }
  }
}

}  // namespace acrc::spp
