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

// Selectivity estimation from evaluated samples: Beta posteriors, per-group
// sampling budgets, the adaptive budget search, cumulative within-group
// sampling and the choice of the correlated column.

#ifndef UDFSEL_ESTIMATION_H_
#define UDFSEL_ESTIMATION_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "udfsel/core.h"
#include "udfsel/dataset.h"
#include "udfsel/random.h"

namespace udfsel {

struct Posterior {
  double mean = 0.5;
  double variance = 1.0 / 12.0;
};

// Mean and variance of Beta(F+ + 1, F - F+ + 1).
Posterior BetaPosterior(int64_t sampled, int64_t positive);

enum class SchemeKind { kConstant, kTwoThirdPower };

struct SamplingScheme {
  SchemeKind kind = SchemeKind::kTwoThirdPower;
  double param = 2.0;  // c for constant, num for two-third-power

  void Validate() const;
};

// Per-group sample counts: min(c, t_a) for the constant scheme, and
// min(t_a, max(1, round(num t_a n^(-1/3)))) for the two-third-power rule.
std::vector<int64_t> SampleBudget(const SamplingScheme& scheme,
                                  std::span<const int64_t> sizes);

// {0.5, 1, 1.5, 2, 2.5, 3.5, 5} times alpha.
std::vector<double> DefaultNumGrid(double alpha);

struct AdaptiveStep {
  double num = 0.0;
  std::optional<double> cost;  // empty when the point was infeasible
};

struct AdaptiveResult {
  size_t best_index = 0;
  double best_num = 0.0;
  double best_cost = 0.0;
  std::vector<AdaptiveStep> steps;  // grid points actually visited
};

// Walks the ascending grid, calling `projected_cost` at each point, and stops
// once the cost has risen at two consecutive points. Returns the cheapest
// point visited. Throws InfeasibleError when every visited point failed.
AdaptiveResult AdaptiveNumSearch(
    std::span<const double> grid,
    const std::function<std::optional<double>(double num)>& projected_cost);

// Cumulative uniform sampling without replacement inside each group. Rows
// labeled earlier (for instance during column selection) are placed first,
// so they count toward the budget and are never evaluated twice.
class GroupSampler {
 public:
  GroupSampler(const Grouping& grouping, const std::vector<uint8_t>& labels,
               uint64_t seed);

  // Marks rows as already labeled.
  void Adopt(std::span<const size_t> rows);
  // Grows the sample of every group to at least `budget[a]` tuples.
  void ExtendTo(std::span<const int64_t> budget);

  int64_t sampled(size_t group) const { return sampled_[group]; }
  int64_t positive(size_t group) const { return positive_[group]; }
  int64_t TotalSampled() const;
  std::vector<uint8_t> SampledMask() const;
  // Group statistics with Beta-posterior estimates from the tallies.
  std::vector<GroupStats> Stats() const;

 private:
  void Take(size_t group, size_t position);

  const Grouping* grouping_;
  const std::vector<uint8_t>* labels_;
  Rng rng_;
  std::vector<std::vector<size_t>> order_;  // per group; prefix is sampled
  std::vector<size_t> position_;            // row -> index in its order_
  std::vector<int64_t> sampled_, positive_;
};

// Uniform sample over all rows that can be grown in place.
class RowSample {
 public:
  RowSample(size_t rows, uint64_t seed);
  void GrowTo(size_t k);
  std::span<const size_t> rows() const { return {order_.data(), size_}; }
  size_t size() const { return size_; }

 private:
  Rng rng_;
  std::vector<size_t> order_;
  size_t size_ = 0;
};

struct ColumnCandidate {
  std::string name;
  size_t distinct = 0;
  double estimated_cost = 0.0;
};

struct ColumnSelection {
  std::string column;
  Grouping grouping;
  std::vector<GroupStats> groups;  // estimates from the labeled sample
  std::vector<size_t> sample_rows;
  int doublings = 0;
  std::vector<ColumnCandidate> candidates;
};

// Labels a uniform sample of ceil(fraction * n) rows, keeps the columns with
// at most sqrt(sample size) distinct values (doubling the sample until one
// qualifies), and returns the candidate whose greedy plan on the estimated
// selectivities is cheapest. The first column wins ties.
ColumnSelection SelectCorrelatedColumn(const Dataset& dataset,
                                       const std::vector<uint8_t>& labels,
                                       const Constraints& constraints,
                                       const CostModel& cost, uint64_t seed,
                                       double fraction = 0.01);

// Greedy-plan cost on estimated groups, or the full-evaluation cost when the
// greedy precheck fails.
double EstimatedGreedyCost(std::span<const GroupStats> groups,
                           const Constraints& constraints,
                           const CostModel& cost);

}  // namespace udfsel

#endif  // UDFSEL_ESTIMATION_H_
