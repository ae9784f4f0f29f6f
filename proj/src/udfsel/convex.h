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

// Solvers for the programs over estimated selectivities. The precision and
// recall margins must exceed e_rho times a deviation bound, which is either
// the sum of per-group deviations (unknown correlations) or the root of the
// summed variances (independent groups). In sampling-aware mode the tuples
// already evaluated during estimation count toward the margins and the cost.

#ifndef UDFSEL_CONVEX_H_
#define UDFSEL_CONVEX_H_

#include <vector>

#include "udfsel/bounds.h"
#include "udfsel/core.h"

namespace udfsel {

struct ConvexInstance {
  std::vector<GroupStats> groups;
  Constraints constraints;
  CostModel cost;
  CorrelationMode mode = CorrelationMode::kIndependent;
  bool sampling_aware = false;
};

struct SolverSettings {
  int max_iterations = 5000;
  double kkt_tolerance = 1e-6;
  double feasibility_margin = 1e-6;

  void Validate() const;
};

// Constraint values at a strategy: margin - e_rho * deviation. A strategy is
// feasible when both are >= 0.
struct ConvexSlack {
  double precision = 0.0;
  double recall = 0.0;
};

ConvexSlack EvaluateConvexSlack(const ConvexInstance& inst,
                                const Strategy& strategy);

// Cost of the strategy under the instance's objective.
double ConvexObjective(const ConvexInstance& inst, const Strategy& strategy);

struct ConvexResult {
  Strategy strategy;
  double cost = 0.0;
  int iterations = 0;
  bool polished = false;  // the active-set refinement was accepted
  bool restored = false;  // the feasibility restoration moved the point
};

// Minimizes the objective subject to both constraints and 0 <= E <= R <= 1.
// Groups without unsampled tuples get R = E = 0. Throws InfeasibleError when
// even R = E = 1 violates a constraint or no feasible point is found.
ConvexResult SolveConvex(const ConvexInstance& inst,
                         const SolverSettings& settings = {});

}  // namespace udfsel

#endif  // UDFSEL_CONVEX_H_
