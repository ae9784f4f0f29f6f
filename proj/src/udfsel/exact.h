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

// Ground-truth solvers for small instances. SolvePerfectInformation finds the
// cheapest deterministic strategy when every group's correct and incorrect
// counts are known; GridOracle searches fractional strategies on a grid for
// the linear program the greedy solver targets.

#ifndef UDFSEL_EXACT_H_
#define UDFSEL_EXACT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "udfsel/bounds.h"
#include "udfsel/core.h"

namespace udfsel {

struct LabeledGroup {
  std::string id;
  int64_t correct = 0;    // C_a
  int64_t incorrect = 0;  // W_a

  int64_t size() const { return correct + incorrect; }
};

struct PerfectInfoInstance {
  std::vector<LabeledGroup> groups;
  Constraints constraints;  // rho is ignored
  CostModel cost;
};

inline constexpr size_t kMaxExactGroups = 16;
inline constexpr size_t kMaxGridGroups = 3;
inline constexpr int kMaxGridResolution = 400;

struct ExactResult {
  bool feasible = false;
  Strategy strategy;  // every R_a, E_a is 0 or 1
  double cost = 0.0;
  int64_t evaluated = 0;
  int64_t retrieved = 0;
};

// Enumerates every discard / retrieve / retrieve-and-evaluate assignment and
// returns the cheapest one meeting both constraints in exact arithmetic.
// Ties go to fewer evaluated tuples, then fewer retrieved tuples, then the
// lexicographically first assignment (discard < retrieve < evaluate).
ExactResult SolvePerfectInformation(const PerfectInfoInstance& inst);

// Closest rational p/q to x with q <= max_den, by continued fractions.
struct Rational {
  int64_t num = 0;
  int64_t den = 1;
};
Rational ToRational(double x, int64_t max_den = 1000000);

struct GridResult {
  bool feasible = false;
  Strategy strategy;
  double cost = 0.0;
};

// Minimum-cost strategy with R_a, E_a on {0, 1/q, ..., 1} satisfying
// PrecisionMargin >= h_p and RecallMargin >= h_r. Thresholds default to the
// Hoeffding values for the instance; `thresholds` overrides them. The search
// is exact over the grid: R vectors are enumerated, and the evaluate vector
// for each is found by a bounded covering knapsack with pruning.
GridResult GridOracle(std::span<const GroupStats> groups,
                      const Constraints& constraints, const CostModel& cost,
                      int resolution,
                      std::optional<Thresholds> thresholds = std::nullopt);

}  // namespace udfsel

#endif  // UDFSEL_EXACT_H_
