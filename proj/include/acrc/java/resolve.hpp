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

// Scope-aware binding of local variable and parameter names.

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "acrc/java/ast.hpp"

namespace acrc::java {

enum class SymbolKind { kParam, kLocal, kForEach, kCatch, kResource, kPattern };

struct Symbol {
  int id = -1;
  std::string name;
  SymbolKind kind = SymbolKind::kLocal;
};

struct Resolution {
  std::vector<Symbol> symbols;
  // Bare names (not after `.`, not a call target) with no local binding,
  // including names inside lambda and anonymous class bodies.
  std::set<std::string> unresolved;

  std::set<std::string> local_names() const {
    std::set<std::string> out;
    for (const Symbol& s : symbols) out.insert(s.name);
    return out;
  }
};

namespace detail {

class Resolver {
 public:
  Resolution run(Node& method) {
    push();
    for (Node& k : method.kids) {
      if (k.kind == Kind::kParams) {
        for (Node& p : k.kids) {
          if (p.kind == Kind::kParam) declare(last_ident(p), SymbolKind::kParam);
        }
      } else if (k.kind == Kind::kBlock) {
        walk(k);
      }
    }
    pop();
    return std::move(out_);
  }

 private:
  static Node& last_ident(Node& n) {
    for (auto it = n.kids.rbegin(); it != n.kids.rend(); ++it) {
      if (it->is_leaf() && it->token_kind == TokenKind::kIdentifier) return *it;
    }
    throw Error(ErrorCode::kParseError, "declaration without a name");
  }

  void push() { scopes_.emplace_back(); }
  void pop() { scopes_.pop_back(); }

  void declare(Node& leaf, SymbolKind kind) {
    const int id = static_cast<int>(out_.symbols.size());
    out_.symbols.push_back(Symbol{id, leaf.text, kind});
    scopes_.back()[leaf.text] = id;
    leaf.symbol = id;
  }

  int lookup(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return f->second;
    }
    return -1;
  }

  void reference(Node& leaf) {
    leaf.symbol = lookup(leaf.text);
    if (leaf.symbol < 0) out_.unresolved.insert(leaf.text);
  }

  // Opaque token runs (lambdas, anonymous class bodies).
  void walk_opaque(Node& n) {
    for (std::size_t i = 0; i < n.kids.size(); ++i) {
      Node& t = n.kids[i];
      if (!t.is_leaf() || t.token_kind != TokenKind::kIdentifier) continue;
      const bool after_dot = i > 0 && (n.kids[i - 1].is_leaf(".") || n.kids[i - 1].is_leaf("::"));
      const bool before_call = i + 1 < n.kids.size() && n.kids[i + 1].is_leaf("(");
      if (after_dot || before_call) continue;
      const int id = lookup(t.text);
      if (id >= 0) {
        t.symbol = id;
      } else {
        out_.unresolved.insert(t.text);
      }
    }
  }

  void walk_kids(Node& n, std::size_t from = 0) {
    for (std::size_t i = from; i < n.kids.size(); ++i) walk(n.kids[i]);
  }

  void walk(Node& n) {
    switch (n.kind) {
      case Kind::kLeaf:
      case Kind::kMarker:
      case Kind::kType:
      case Kind::kTypeArgs:
      case Kind::kTypeParams:
      case Kind::kAnnotation:
      case Kind::kModifiers:
      case Kind::kClassLit:
      case Kind::kBreak:
      case Kind::kContinue:
        return;
      case Kind::kBlock:
      case Kind::kSwitchBody:
      case Kind::kFor:
        push();
        walk_kids(n);
        pop();
        return;
      case Kind::kLocalVar:
        for (Node& k : n.kids) {
          if (k.kind != Kind::kDeclarator) continue;
          declare(k.kids.front(), SymbolKind::kLocal);
          walk_kids(k, 1);
        }
        return;
      case Kind::kForEach: {
        push();
        Node* var = n.find(Kind::kForVar);
        for (std::size_t i = 0; i < n.kids.size(); ++i) {
          if (n.kids[i].is_leaf(":")) walk(n.kids[i + 1]);
        }
        declare(last_ident(*var), SymbolKind::kForEach);
        walk(n.kids.back());
        pop();
        return;
      }
      case Kind::kTry:
        push();
        for (Node& k : n.kids) {
          if (k.kind == Kind::kResources || k.kind == Kind::kBlock) walk(k);
        }
        pop();
        for (Node& k : n.kids) {
          if (k.kind == Kind::kCatch || k.kind == Kind::kFinally) walk(k);
        }
        return;
      case Kind::kResource:
        if (n.find(Kind::kType)) {
          walk(n.kids.back());
          declare(last_ident(n), SymbolKind::kResource);
        } else {
          walk_kids(n);
        }
        return;
      case Kind::kCatch: {
        push();
        declare(last_ident(*n.find(Kind::kCatchParam)), SymbolKind::kCatch);
        walk(*n.find(Kind::kBlock));
        pop();
        return;
      }
      case Kind::kLabeled:
        walk(n.kids[2]);
        return;
      case Kind::kName:
        reference(n.kids.front());
        return;
      case Kind::kFieldAccess:
      case Kind::kMethodRef:
        walk(n.kids.front());
        return;
      case Kind::kCall:
        if (!n.kids.front().is_leaf()) walk(n.kids.front());
        walk(n.kids.back());
        return;
      case Kind::kInstanceOf:
        walk(n.kids.front());
        if (n.kids.back().is_leaf() &&
            n.kids.back().token_kind == TokenKind::kIdentifier) {
          declare(n.kids.back(), SymbolKind::kPattern);
        }
        return;
      case Kind::kLambda:
      case Kind::kClassBody:
        walk_opaque(n);
        return;
      default:
        walk_kids(n);
        return;
    }
  }

  std::vector<std::map<std::string, int>> scopes_;
  Resolution out_;
};

}  // namespace detail

/// Clears and recomputes `symbol` on every leaf of the method.
inline Resolution resolve(MethodAst& ast) {
  visit_mut(ast.root, [](Node& n) { n.symbol = -1; });
  return detail::Resolver().run(ast.root);
}

}  // namespace acrc::java
