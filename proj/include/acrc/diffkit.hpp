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
#include <cstddef>
#include <string>
#include <vector>

#include "acrc/lexer.hpp"

namespace acrc::diff {

using Texts = std::vector<std::string>;

enum class EditKind { kInsert, kDelete };

struct EditRegion {
  EditKind kind = EditKind::kInsert;
  std::size_t anchor = 0;  // delete: first removed index; insert: inserted before this index
  Texts tokens;

  bool operator==(const EditRegion&) const = default;
};

struct EditScript {
  std::vector<EditRegion> regions;
  std::size_t inserted = 0;
  std::size_t deleted = 0;

  std::size_t size() const { return inserted + deleted; }
  bool empty() const { return regions.empty(); }
};

/// Levenshtein distance over tokens, unit costs.
inline std::size_t token_edit_distance(const Texts& a, const Texts& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

inline std::size_t token_edit_distance(const TokenStream& a, const TokenStream& b) {
  return token_edit_distance(token_texts(a), token_texts(b));
}

/// Minimal insert/delete script. Ties resolve toward matching the earliest
/// source tokens; each gap between matches yields at most one delete region
/// followed by one insert region.
inline EditScript edit_script(const Texts& a, const Texts& b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  // lcs[i][j] = LCS length of a[i..] and b[j..]
  std::vector<std::vector<std::size_t>> lcs(n + 1, std::vector<std::size_t>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1
                               : std::max(lcs[i + 1][j], lcs[i][j + 1]);
    }
  }

  EditScript s;
  std::size_t i = 0;
  std::size_t j = 0;
  EditRegion del{EditKind::kDelete, 0, {}};
  EditRegion ins{EditKind::kInsert, 0, {}};
  auto flush = [&] {
    if (!del.tokens.empty()) {
      s.deleted += del.tokens.size();
      s.regions.push_back(std::move(del));
    }
    if (!ins.tokens.empty()) {
      ins.anchor = i;
      s.inserted += ins.tokens.size();
      s.regions.push_back(std::move(ins));
    }
    del = {EditKind::kDelete, 0, {}};
    ins = {EditKind::kInsert, 0, {}};
  };
  while (i < n || j < m) {
    if (i < n && j < m && a[i] == b[j] && lcs[i][j] == lcs[i + 1][j + 1] + 1) {
      flush();
      ++i;
      ++j;
    } else if (i < n && (j == m || lcs[i + 1][j] == lcs[i][j])) {
      if (del.tokens.empty()) del.anchor = i;
      del.tokens.push_back(a[i++]);
    } else {
      ins.tokens.push_back(b[j++]);
    }
  }
  flush();
  return s;
}

inline EditScript edit_script(const TokenStream& a, const TokenStream& b) {
  return edit_script(token_texts(a), token_texts(b));
}

/// Replays a script on its source stream.
inline Texts apply_script(const Texts& source, const EditScript& s) {
  Texts out;
  std::size_t cur = 0;
  for (const EditRegion& reg : s.regions) {
    const std::size_t upto = std::min(reg.anchor, source.size());
    if (cur < upto) out.insert(out.end(), source.begin() + cur, source.begin() + upto);
    cur = std::max(cur, upto);
    if (reg.kind == EditKind::kDelete) {
      cur += reg.tokens.size();
    } else {
      out.insert(out.end(), reg.tokens.begin(), reg.tokens.end());
    }
  }
  if (cur < source.size()) out.insert(out.end(), source.begin() + cur, source.end());
  return out;
}

}  // namespace acrc::diff
