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

#include <map>
#include <set>
#include <string>
#include <vector>

#include "acrc/java/ast.hpp"
#include "acrc/java/resolve.hpp"

namespace acrc::java {

// Def-use edges of a resolved method with variables renamed var0, var1, ...
// in order of first appearance. Two edge shapes:
//   "use varK dN"        a read of varK reaches its N-th definition
//   "def varK <- varJ"   a definition of varK reads varJ
class DataFlow {
 public:
  static std::vector<std::string> edges(MethodAst& ast) {
    resolve(ast);
    DataFlow df;
    for (const Node& k : ast.root.kids) {
      if (k.kind == Kind::kParams) {
        for (const Node& p : k.kids) {
          if (p.kind == Kind::kParam) df.declarations(p);
        }
      } else if (k.kind == Kind::kBlock) {
        df.walk(k, nullptr);
      }
    }
    return std::move(df.out_);
  }

 private:
  using Reads = std::set<int>;

  std::string var(int s) {
    auto [it, fresh] = names_.try_emplace(s, static_cast<int>(names_.size()));
    return "var" + std::to_string(it->second);
  }

  void use(int s, Reads* reads) {
    out_.push_back("use " + var(s) + " d" + std::to_string(defs_[s]));
    if (reads) reads->insert(s);
  }

  void define(int s, const Reads& from) {
    const std::string v = var(s);
    ++defs_[s];
    for (int r : from) out_.push_back("def " + v + " <- " + var(r));
  }

  // Declared names directly under `n` (params, catch params, patterns).
  void declarations(const Node& n) {
    for (const Node& k : n.kids) {
      if (k.is_leaf() && k.symbol >= 0) define(k.symbol, {});
    }
  }

  static const Node* bound_name(const Node& e) {
    if (e.kind == Kind::kName && e.kids.front().symbol >= 0) return &e.kids.front();
    return nullptr;
  }

  void walk_from(const Node& n, std::size_t from, Reads* reads) {
    for (std::size_t i = from; i < n.kids.size(); ++i) walk(n.kids[i], reads);
  }

  void walk(const Node& n, Reads* reads) {
    switch (n.kind) {
      case Kind::kName:
        if (n.kids.front().symbol >= 0) use(n.kids.front().symbol, reads);
        return;
      case Kind::kLambda:
      case Kind::kClassBody:
        for (const Node& k : n.kids) {
          if (k.is_leaf() && k.symbol >= 0) use(k.symbol, reads);
        }
        return;
      case Kind::kDeclarator: {
        Reads r;
        walk_from(n, 1, &r);
        if (n.kids.size() >= 3) define(n.kids.front().symbol, r);
        return;
      }
      case Kind::kResource: {
        Reads r;
        walk(n.kids.back(), &r);
        if (n.find(Kind::kType)) {
          for (const Node& k : n.kids) {
            if (k.is_leaf() && k.symbol >= 0) define(k.symbol, r);
          }
        }
        if (reads) reads->insert(r.begin(), r.end());
        return;
      }
      case Kind::kForEach: {
        Reads r;
        for (std::size_t i = 0; i + 1 < n.kids.size(); ++i) {
          if (n.kids[i].is_leaf(":")) walk(n.kids[i + 1], &r);
        }
        if (const Node* v = n.find(Kind::kForVar)) {
          for (const Node& k : v->kids) {
            if (k.is_leaf() && k.symbol >= 0) define(k.symbol, r);
          }
        }
        walk(n.kids.back(), nullptr);
        return;
      }
      case Kind::kCatch:
        if (const Node* p = n.find(Kind::kCatchParam)) declarations(*p);
        walk(*n.find(Kind::kBlock), nullptr);
        return;
      case Kind::kInstanceOf:
        walk(n.kids.front(), reads);
        declarations(n);
        return;
      case Kind::kAssign: {
        Reads r;
        walk(n.kids[2], &r);
        const Node* target = bound_name(n.kids[0]);
        if (!target) {
          walk(n.kids[0], &r);
        } else if (n.kids[1].text != "=") {
          use(target->symbol, &r);
        }
        if (target) define(target->symbol, r);
        if (reads) reads->insert(r.begin(), r.end());
        return;
      }
      case Kind::kUnary:
      case Kind::kPostfix: {
        const bool prefix = n.kind == Kind::kUnary;
        const Node& op = prefix ? n.kids.front() : n.kids.back();
        const Node& operand = prefix ? n.kids.back() : n.kids.front();
        const Node* target = bound_name(operand);
        if (target && (op.is_leaf("++") || op.is_leaf("--"))) {
          Reads r;
          use(target->symbol, &r);
          define(target->symbol, r);
          if (reads) reads->insert(target->symbol);
          return;
        }
        walk_from(n, 0, reads);
        return;
      }
      default:
        walk_from(n, 0, reads);
        return;
    }
  }

  std::map<int, int> names_;
  std::map<int, int> defs_;
  std::vector<std::string> out_;
};

inline std::vector<std::string> dataflow_edges(MethodAst& ast) { return DataFlow::edges(ast); }

}  // namespace acrc::java
