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

#include <ostream>
#include <string>
#include <vector>

#include "acrc/csv.hpp"
#include "acrc/spp/engine.hpp"

namespace acrc::harness {

struct Exclusion {
  std::string instance_id;
  spp::PType ptype = spp::PType::kIfElseSwap;
  spp::Reason reason = spp::Reason::kOk;
  std::string detail;
};

struct Generated {
  std::vector<spp::PerturbedVariant> variants;
  std::vector<Exclusion> exclusions;
};

/// One variant per (instance, applicable ptype), instance-major.
inline Generated generate_variants(const std::vector<ReviewInstance>& instances,
                                   const std::vector<spp::PType>& ptypes, std::uint64_t seed) {
  Generated g;
  for (const ReviewInstance& inst : instances) {
    for (spp::PType p : ptypes) {
      spp::Outcome o;
      try {
        o = spp::perturb(inst, p, seed);
      } catch (const Error& e) {
        g.exclusions.push_back({inst.id, p, spp::Reason::kParseError, e.what()});
        continue;
      }
      if (o.variant) {
        g.variants.push_back(std::move(*o.variant));
      } else {
        g.exclusions.push_back({inst.id, p, o.status.reason, o.status.detail});
      }
    }
  }
  return g;
}

inline void write_exclusions(std::ostream& os, const std::vector<Exclusion>& xs) {
  csv::write_row(os, {"instance_id", "ptype", "reason", "detail"});
  for (const Exclusion& x : xs) {
    csv::write_row(os, {x.instance_id, spp::ptype_id(x.ptype),
                        std::string(spp::reason_code(x.reason)), x.detail});
  }
}

}  // namespace acrc::harness
