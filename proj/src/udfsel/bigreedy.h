// Copyright 2026 The udfsel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Greedy solver for the linear program over exactly known selectivities:
// retrieve the most selective groups until the recall target is met, then
// evaluate the least selective retrieved groups until the precision target is
// met. Also provides the sufficient feasibility test and the optimality-gap
// bound for the program.

#ifndef UDFSEL_BIGREEDY_H_
#define UDFSEL_BIGREEDY_H_

#include <span>
#include <vector>

#include "udfsel/bounds.h"
#include "udfsel/core.h"

namespace udfsel {

struct FeasibilityReport {
  Thresholds thresholds;
  // sum_a max(t_a (s_a - alpha), 0) - h_p; the condition holds when > 0.
  double precision_slack = 0.0;
  // sum_a (1 - beta) t_a s_a - h_r; the condition holds when > 0.
  double recall_slack = 0.0;

  bool precision_ok() const { return precision_slack > 0.0; }
  bool recall_ok() const { return recall_slack > 0.0; }
  bool ok() const { return precision_ok() && recall_ok(); }
};

FeasibilityReport CheckFeasibility(std::span<const GroupStats> groups,
                                   const Constraints& constraints);

// Group indices by decreasing selectivity, then decreasing size, then id.
std::vector<size_t> SelectivityOrder(std::span<const GroupStats> groups);

// Runs the precheck and then the greedy fill. Throws InfeasibleError naming
// the failed condition when the precheck fails.
Strategy SolveBiGreedy(std::span<const GroupStats> groups,
                       const Constraints& constraints);

// The greedy fill against explicit thresholds, without the precheck. Throws
// InfeasibleError when a target cannot be reached even with R = E = 1 on the
// groups the fill may use.
Strategy FillBiGreedy(std::span<const GroupStats> groups,
                      const Constraints& constraints,
                      const Thresholds& thresholds);

// Upper bound on cost(greedy) - cost(optimum) for the instance. Throws
// ValidationError when alpha = 1 or every selectivity is zero.
double TightnessGap(std::span<const GroupStats> groups,
                    const Constraints& constraints, const CostModel& cost);

}  // namespace udfsel

#endif  // UDFSEL_BIGREEDY_H_
