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

// Domain types shared by every solver: query constraints, the cost model,
// per-group statistics, probabilistic strategies and realized outcome counts.

#ifndef UDFSEL_CORE_H_
#define UDFSEL_CORE_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace udfsel {

// Raised for malformed inputs (bad constraint values, unknown names, missing
// columns). Maps to exit code 1 at the C boundary.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a solver cannot produce a strategy for a well-formed instance.
// Maps to exit code 2 at the C boundary.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precision lower bound `alpha`, recall lower bound `beta`, and the
// probability `rho` with which each bound must hold.
struct Constraints {
  double alpha = 0.8;
  double beta = 0.8;
  double rho = 0.8;

  // Throws ValidationError unless 0 <= alpha, beta <= 1 and 0 <= rho < 1.
  void Validate() const;

  friend bool operator==(const Constraints&, const Constraints&) = default;
};

// Cost per retrieved tuple and per predicate evaluation.
struct CostModel {
  double retrieve = 1.0;
  double evaluate = 3.0;

  void Validate() const;
  double Full() const { return retrieve + evaluate; }

  friend bool operator==(const CostModel&, const CostModel&) = default;
};

// Statistics for one value of the correlated column.
struct GroupStats {
  std::string id;
  int64_t size = 0;
  double selectivity = 0.0;  // mean of the selectivity estimate
  double variance = 0.0;     // variance of the selectivity estimate
  int64_t sampled = 0;            // tuples already evaluated
  int64_t sampled_positive = 0;   // of which satisfied the predicate

  int64_t Unsampled() const { return size - sampled; }
  void Validate() const;
};

// Builds a group with an exactly known selectivity (zero variance).
GroupStats MakeGroup(std::string id, int64_t size, double selectivity);

// Builds a group whose selectivity estimate is the Beta posterior of its
// sample tally.
GroupStats MakeSampledGroup(std::string id, int64_t size, int64_t sampled,
                            int64_t sampled_positive);

int64_t TotalSize(std::span<const GroupStats> groups);

// Per-group retrieve and evaluate probabilities.
struct Decision {
  double retrieve = 0.0;
  double evaluate = 0.0;

  friend bool operator==(const Decision&, const Decision&) = default;
};

struct Strategy {
  std::vector<Decision> decisions;

  static Strategy Uniform(size_t groups, double retrieve, double evaluate);
  size_t size() const { return decisions.size(); }
  const Decision& operator[](size_t i) const { return decisions[i]; }
  Decision& operator[](size_t i) { return decisions[i]; }

  // Throws ValidationError unless 0 <= E <= R <= 1 for every group and the
  // strategy covers exactly `groups` groups; the message names the first
  // offending group.
  void Validate(std::span<const GroupStats> groups) const;

  friend bool operator==(const Strategy&, const Strategy&) = default;
};

// Realized outcome of one execution, per group.
struct RealizedCounts {
  int64_t retrieved_correct = 0;     // R+
  int64_t retrieved_incorrect = 0;   // R-
  int64_t evaluated_correct = 0;     // E+
  int64_t evaluated_incorrect = 0;   // E-
  int64_t correct = 0;               // C
  int64_t size = 0;                  // t

  int64_t Output() const {
    return retrieved_correct + retrieved_incorrect - evaluated_incorrect;
  }
  int64_t Retrieved() const { return retrieved_correct + retrieved_incorrect; }
  int64_t Evaluated() const { return evaluated_correct + evaluated_incorrect; }
  bool Valid() const;

  friend bool operator==(const RealizedCounts&,
                         const RealizedCounts&) = default;
};

// Fraction of output tuples that are correct; 1 for an empty output.
double Precision(std::span<const RealizedCounts> counts);

// Fraction of correct tuples that are output; 1 when nothing is correct.
double Recall(std::span<const RealizedCounts> counts);

// Realized cost: o_r per retrieval plus o_e per evaluation.
double RealizedCost(std::span<const RealizedCounts> counts,
                    const CostModel& cost);

// Expected cost sum_a t_a (o_r R_a + o_e E_a).
double ExpectedCost(const Strategy& strategy,
                    std::span<const GroupStats> groups, const CostModel& cost);

// Expected cost when the sampled tuples of each group have already been
// retrieved and evaluated: sum_a (t_a - F_a)(o_r R_a + o_e E_a)
// + F_a (o_r + o_e).
double SamplingAwareCost(const Strategy& strategy,
                         std::span<const GroupStats> groups,
                         const CostModel& cost);

}  // namespace udfsel

#endif  // UDFSEL_CORE_H_
