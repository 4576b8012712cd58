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
#include <vector>

#include "acrc/error.hpp"

namespace acrc::stats {

/// Largest drop, in percent, over per-perturbation EXM rates in [0, 1].
inline double max_delta_exm(const std::vector<double>& rates) {
  if (rates.empty()) throw Error(ErrorCode::kEmptyInput, "no EXM rates");
  double worst = 0.0;
  for (double r : rates) {
    if (r < 0.0 || r > 1.0) throw Error(ErrorCode::kInvalidInput, "EXM rate outside [0, 1]");
    worst = std::max(worst, (1.0 - r) * 100.0);
  }
  return worst;
}

}  // namespace acrc::stats
