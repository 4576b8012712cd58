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

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "acrc/error.hpp"
#include "acrc/java/ast.hpp"
#include "acrc/lexer.hpp"

namespace acrc::java {

// Half-open token interval [start, end) over the tagged token stream, from
// the <START> token through the <END> token.
struct TaggedSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::vector<std::uint32_t> covered;  // statement ids between the markers
};

struct RenderOptions {
  bool tags = true;
  bool comments = true;
  bool require_span = false;  // throw SpanUnmappable if the markers are gone
};

// Canonical source plus its token stream. `perturbed[i]` tells whether token
// i came from a node flagged as created or modified by a perturbation.
struct Rendered {
  std::string text;
  TokenStream tokens;
  std::vector<bool> perturbed;
};

namespace detail {

inline bool can_abut(std::string_view a, std::string_view b) {
  std::string joined;
  joined.reserve(a.size() + b.size());
  joined.append(a).append(b);
  const TokenStream t = tokenize(joined, LexOptions{.keep_comments = true});
  return t.size() == 2 && t[0].text == a && t[1].text == b;
}

class Printer {
 public:
  explicit Printer(RenderOptions opts) : opts_(opts) {}

  Rendered run(const MethodAst& ast) {
    const Node& root = ast.root;
    open_line(0);
    for (std::size_t i = 0; i < root.kids.size(); ++i) {
      const Node& k = root.kids[i];
      if (k.kind == Kind::kBlock) {
        emit_block(k, 0, root.perturbed);
      } else {
        inline_node(k, root.perturbed, root.kind);
      }
    }
    return finish();
  }

 private:
  struct Piece {
    std::string text;
    TokenKind kind = TokenKind::kOperator;
    bool perturbed = false;
    bool tight_before = false;
    bool tight_after = false;
    bool glue = false;
    bool generic_close = false;
  };
  struct Line {
    int indent = 0;
    std::vector<Piece> pieces;
  };

  void open_line(int indent) { lines_.push_back(Line{indent, {}}); }

  void put_piece(Piece p) { lines_.back().pieces.push_back(std::move(p)); }

  void put_leaf(const Node& leaf, bool perturbed, Kind parent, std::size_t index) {
    Piece p;
    p.text = leaf.text;
    p.kind = leaf.token_kind;
    p.perturbed = perturbed || leaf.perturbed;
    p.glue = leaf.glue_right;
    const std::string_view t = leaf.text;
    if (t == ")" || t == "]" || t == ";" || t == "," || t == "." || t == "..." ||
        t == "::" || t == "[") {
      p.tight_before = true;
    }
    if (t == "(" || t == "[" || t == "." || t == "::" || t == "@") p.tight_after = true;
    if (t == "(" && !lines_.back().pieces.empty()) {
      const Piece& prev = lines_.back().pieces.back();
      if (prev.kind == TokenKind::kIdentifier || prev.text == "this" ||
          prev.text == "super" || prev.generic_close) {
        p.tight_before = true;
      }
    }
    const bool generic = parent == Kind::kTypeArgs || parent == Kind::kTypeParams;
    if (generic && t == "<") {
      p.tight_after = true;
      p.tight_before = parent == Kind::kTypeArgs;
    }
    if (generic && t == ">") {
      p.tight_before = true;
      p.generic_close = true;
    }
    if (parent == Kind::kUnary && index == 0) p.tight_after = true;
    if (parent == Kind::kPostfix && index == 1) p.tight_before = true;
    if (t == ":" && (parent == Kind::kCaseLabel || parent == Kind::kLabeled)) {
      p.tight_before = true;
    }
    put_piece(std::move(p));
  }

  void inline_node(const Node& n, bool perturbed, Kind parent, std::size_t index = 0) {
    if (n.is_marker()) return;
    if (n.is_leaf()) {
      put_leaf(n, perturbed, parent, index);
      return;
    }
    const bool inh = perturbed || n.perturbed;
    for (std::size_t i = 0; i < n.kids.size(); ++i) {
      inline_node(n.kids[i], inh, n.kind, i);
    }
  }

  void emit_trivia(const std::vector<std::string>& comments, int indent) {
    if (!opts_.comments) return;
    for (const std::string& c : comments) {
      open_line(indent);
      Piece p;
      p.text = c;
      p.kind = TokenKind::kComment;
      put_piece(std::move(p));
    }
  }

  void emit_item(const Node& s, int indent, bool perturbed) {
    if (s.is_marker() && !opts_.tags) return;
    emit_trivia(s.trivia, indent);
    open_line(indent);
    emit_statement(s, indent, perturbed);
  }

  void emit_block(const Node& b, int indent, bool perturbed) {
    const bool inh = perturbed || b.perturbed;
    put_leaf(b.kids.front(), inh, b.kind, 0);
    for (std::size_t i = 1; i + 1 < b.kids.size(); ++i) {
      emit_item(b.kids[i], indent + 1, inh);
    }
    emit_trivia(b.trailing, indent + 1);
    open_line(indent);
    put_leaf(b.kids.back(), inh, b.kind, b.kids.size() - 1);
  }

  // Body of a compound statement. Returns true when it ended with `}` on the
  // current line, so a following `else`/`while` can continue that line.
  bool emit_body(const Node& b, int indent, bool perturbed) {
    if (b.kind == Kind::kBlock) {
      emit_block(b, indent, perturbed);
      return true;
    }
    open_line(indent + 1);
    emit_statement(b, indent + 1, perturbed);
    return false;
  }

  void emit_leaves(const Node& s, std::size_t from, std::size_t to, bool inh) {
    for (std::size_t i = from; i < to; ++i) inline_node(s.kids[i], inh, s.kind, i);
  }

  void emit_statement(const Node& s, int indent, bool perturbed) {
    const bool inh = perturbed || s.perturbed;
    switch (s.kind) {
      case Kind::kMarker: {
        Piece p;
        p.text = s.text;
        p.kind = TokenKind::kTag;
        put_piece(std::move(p));
        return;
      }
      case Kind::kBlock:
        emit_block(s, indent, perturbed);
        return;
      case Kind::kIf: {
        emit_leaves(s, 0, 4, inh);
        const bool closed = emit_body(s.kids[4], indent, inh);
        if (s.kids.size() > 5) {
          if (!closed) open_line(indent);
          inline_node(s.kids[5], inh, s.kind, 5);
          const Node& other = s.kids[6];
          if (other.kind == Kind::kIf) {
            emit_statement(other, indent, inh);
          } else {
            emit_body(other, indent, inh);
          }
        }
        return;
      }
      case Kind::kWhile:
      case Kind::kFor:
      case Kind::kForEach:
      case Kind::kSync:
        emit_leaves(s, 0, s.kids.size() - 1, inh);
        emit_body(s.kids.back(), indent, inh);
        return;
      case Kind::kDo: {
        inline_node(s.kids[0], inh, s.kind, 0);
        if (!emit_body(s.kids[1], indent, inh)) open_line(indent);
        emit_leaves(s, 2, s.kids.size(), inh);
        return;
      }
      case Kind::kTry:
        for (std::size_t i = 0; i < s.kids.size(); ++i) {
          const Node& k = s.kids[i];
          if (k.kind == Kind::kBlock) {
            emit_block(k, indent, inh);
          } else if (k.kind == Kind::kCatch || k.kind == Kind::kFinally) {
            const bool kinh = inh || k.perturbed;
            emit_leaves(k, 0, k.kids.size() - 1, kinh);
            emit_block(k.kids.back(), indent, kinh);
          } else {
            inline_node(k, inh, s.kind, i);
          }
        }
        return;
      case Kind::kLabeled:
        emit_leaves(s, 0, 2, inh);
        emit_statement(s.kids[2], indent, inh);
        return;
      case Kind::kSwitch: {
        emit_leaves(s, 0, 4, inh);
        const Node& body = s.kids[4];
        const bool binh = inh || body.perturbed;
        put_leaf(body.kids.front(), binh, body.kind, 0);
        for (std::size_t i = 1; i + 1 < body.kids.size(); ++i) {
          const Node& item = body.kids[i];
          emit_item(item, item.kind == Kind::kCaseLabel ? indent + 1 : indent + 2, binh);
        }
        emit_trivia(body.trailing, indent + 2);
        open_line(indent);
        put_leaf(body.kids.back(), binh, body.kind, body.kids.size() - 1);
        return;
      }
      default:
        inline_node(s, perturbed, Kind::kMethod);
        return;
    }
  }

  Rendered finish() {
    struct Range {
      std::size_t begin;
      std::size_t end;
      bool perturbed;
    };
    std::vector<Range> ranges;
    std::string text;
    bool first_line = true;
    for (const Line& line : lines_) {
      if (line.pieces.empty()) continue;
      if (!first_line) text += '\n';
      first_line = false;
      text.append(static_cast<std::size_t>(line.indent) * 4, ' ');
      const Piece* prev = nullptr;
      for (const Piece& p : line.pieces) {
        if (prev) {
          const bool tight = prev->tight_after || p.tight_before || prev->glue;
          if (!tight || (!prev->glue && !can_abut(prev->text, p.text))) text += ' ';
        }
        ranges.push_back({text.size(), text.size() + p.text.size(), p.perturbed});
        text += p.text;
        prev = &p;
      }
    }
    Rendered out;
    out.tokens = tokenize(text);
    out.perturbed.reserve(out.tokens.size());
    auto it = ranges.begin();
    for (const Token& t : out.tokens) {
      const std::size_t b = t.offset;
      const std::size_t e = t.offset + t.text.size();
      while (it != ranges.end() && it->end <= b) ++it;
      bool flag = false;
      for (auto j = it; j != ranges.end() && j->begin < e; ++j) flag = flag || j->perturbed;
      out.perturbed.push_back(flag);
    }
    out.text = std::move(text);
    return out;
  }

  RenderOptions opts_;
  std::vector<Line> lines_;
};

inline void check_markers(const Node& root) {
  int starts = 0;
  int ends = 0;
  bool ordered = true;
  visit(root, [&](const Node& n) {
    if (n.is_start_marker()) ++starts;
    if (n.is_end_marker()) {
      ++ends;
      if (starts == 0) ordered = false;
    }
  });
  if (starts != 1 || ends != 1 || !ordered) {
    throw Error(ErrorCode::kSpanUnmappable,
                "tree does not hold exactly one ordered <START>/<END> pair");
  }
}

}  // namespace detail

/// Canonical rendering: 4-space indent, one statement per line.
inline Rendered render(const MethodAst& ast, RenderOptions opts = {}) {
  if (opts.require_span) detail::check_markers(ast.root);
  return detail::Printer(opts).run(ast);
}

inline std::string serialize(const MethodAst& ast, bool with_tags = true) {
  RenderOptions opts;
  opts.tags = with_tags;
  return render(ast, opts).text;
}

/// Locates the markers in the canonical token stream.
inline TaggedSpan tagged_span(const MethodAst& ast) {
  detail::check_markers(ast.root);
  TaggedSpan span;
  const Rendered r = render(ast);
  for (std::size_t i = 0; i < r.tokens.size(); ++i) {
    if (r.tokens[i].kind != TokenKind::kTag) continue;
    if (r.tokens[i].text == kStartTag) span.start = i;
    if (r.tokens[i].text == kEndTag) span.end = i + 1;
  }
  visit(ast.root, [&](const Node& n) {
    if (!is_statement_list(n.kind)) return;
    bool inside = false;
    for (const Node& item : n.kids) {
      if (item.is_start_marker()) inside = true;
      else if (item.is_end_marker()) inside = false;
      else if (inside && item.id != 0) span.covered.push_back(item.id);
    }
  });
  return span;
}

}  // namespace acrc::java
