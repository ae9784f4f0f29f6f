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

#include "udfsel/estimation.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "udfsel/bigreedy.h"

namespace udfsel {

Posterior BetaPosterior(int64_t sampled, int64_t positive) {
  if (sampled < 0 || positive < 0 || positive > sampled) {
    throw ValidationError("invalid sample tally");
  }
  Posterior p;
  p.mean = (positive + 1.0) / (sampled + 2.0);
  p.variance = p.mean * (1.0 - p.mean) / (sampled + 3.0);
  return p;
}

void SamplingScheme::Validate() const {
  if (!(param > 0.0) || !std::isfinite(param)) {
    throw ValidationError("sampling.param must be positive");
  }
}

std::vector<int64_t> SampleBudget(const SamplingScheme& scheme,
                                  std::span<const int64_t> sizes) {
  scheme.Validate();
  int64_t n = 0;
  for (int64_t t : sizes) n += t;
  std::vector<int64_t> budget;
  budget.reserve(sizes.size());
  for (int64_t t : sizes) {
    if (scheme.kind == SchemeKind::kConstant) {
      budget.push_back(std::min<int64_t>(
          t, static_cast<int64_t>(std::floor(scheme.param))));
    } else {
      const double raw = scheme.param * static_cast<double>(t) *
                         std::pow(static_cast<double>(n), -1.0 / 3.0);
      const int64_t f = std::max<int64_t>(1, std::llround(raw));
      budget.push_back(t >= 1 ? std::min(t, f) : 0);
    }
  }
  return budget;
}

std::vector<double> DefaultNumGrid(double alpha) {
  std::vector<double> grid;
  for (double m : {0.5, 1.0, 1.5, 2.0, 2.5, 3.5, 5.0}) grid.push_back(m * alpha);
  return grid;
}

AdaptiveResult AdaptiveNumSearch(
    std::span<const double> grid,
    const std::function<std::optional<double>(double)>& projected_cost) {
  if (grid.empty()) throw ValidationError("num grid is empty");
  for (size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw ValidationError("num grid must be strictly ascending");
    }
  }
  AdaptiveResult result;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  double best = kInf, previous = kInf;
  int rises = 0;
  for (size_t i = 0; i < grid.size(); ++i) {
    const std::optional<double> cost = projected_cost(grid[i]);
    result.steps.push_back({grid[i], cost});
    const double value = cost.value_or(kInf);
    if (value < best) {
      best = value;
      result.best_index = i;
    }
    rises = i > 0 && value > previous ? rises + 1 : 0;
    previous = value;
    if (rises == 2) break;
  }
  if (!std::isfinite(best)) {
    throw InfeasibleError("no sampling budget on the grid gave a feasible plan");
  }
  result.best_num = grid[result.best_index];
  result.best_cost = best;
  return result;
}

GroupSampler::GroupSampler(const Grouping& grouping,
                           const std::vector<uint8_t>& labels, uint64_t seed)
    : grouping_(&grouping),
      labels_(&labels),
      rng_(seed),
      order_(grouping.members),
      position_(grouping.group_of_row.size()),
      sampled_(grouping.size(), 0),
      positive_(grouping.size(), 0) {
  for (const auto& order : order_) {
    for (size_t i = 0; i < order.size(); ++i) position_[order[i]] = i;
  }
}

void GroupSampler::Take(size_t group, size_t position) {
  auto& order = order_[group];
  const size_t slot = static_cast<size_t>(sampled_[group]);
  std::swap(order[slot], order[position]);
  position_[order[slot]] = slot;
  position_[order[position]] = position;
  ++sampled_[group];
  positive_[group] += (*labels_)[order[slot]];
}

void GroupSampler::Adopt(std::span<const size_t> rows) {
  for (size_t row : rows) {
    const size_t g = static_cast<size_t>(grouping_->group_of_row[row]);
    if (position_[row] >= static_cast<size_t>(sampled_[g])) {
      Take(g, position_[row]);
    }
  }
}

void GroupSampler::ExtendTo(std::span<const int64_t> budget) {
  for (size_t g = 0; g < order_.size(); ++g) {
    const int64_t size = static_cast<int64_t>(order_[g].size());
    const int64_t target = std::min(budget[g], size);
    while (sampled_[g] < target) {
      const uint64_t remaining = static_cast<uint64_t>(size - sampled_[g]);
      Take(g, static_cast<size_t>(sampled_[g]) +
                  static_cast<size_t>(rng_.Below(remaining)));
    }
  }
}

int64_t GroupSampler::TotalSampled() const {
  int64_t total = 0;
  for (int64_t f : sampled_) total += f;
  return total;
}

std::vector<uint8_t> GroupSampler::SampledMask() const {
  std::vector<uint8_t> mask(position_.size(), 0);
  for (size_t g = 0; g < order_.size(); ++g) {
    for (int64_t i = 0; i < sampled_[g]; ++i) mask[order_[g][i]] = 1;
  }
  return mask;
}

std::vector<GroupStats> GroupSampler::Stats() const {
  std::vector<GroupStats> stats;
  for (size_t g = 0; g < order_.size(); ++g) {
    stats.push_back(MakeSampledGroup(grouping_->ids[g],
                                     static_cast<int64_t>(order_[g].size()),
                                     sampled_[g], positive_[g]));
  }
  return stats;
}

RowSample::RowSample(size_t rows, uint64_t seed) : rng_(seed), order_(rows) {
  for (size_t i = 0; i < rows; ++i) order_[i] = i;
}

void RowSample::GrowTo(size_t k) {
  k = std::min(k, order_.size());
  if (k <= size_) return;
  rng_.ShuffleInto(&order_, size_, k - size_);
  size_ = k;
}

double EstimatedGreedyCost(std::span<const GroupStats> groups,
                           const Constraints& constraints,
                           const CostModel& cost) {
  try {
    const Strategy st = SolveBiGreedy(groups, constraints);
    return ExpectedCost(st, groups, cost);
  } catch (const InfeasibleError&) {
    return static_cast<double>(TotalSize(groups)) * cost.Full();
  }
}

ColumnSelection SelectCorrelatedColumn(const Dataset& dataset,
                                       const std::vector<uint8_t>& labels,
                                       const Constraints& constraints,
                                       const CostModel& cost, uint64_t seed,
                                       double fraction) {
  const size_t n = dataset.rows();
  if (n == 0) throw ValidationError("dataset is empty");
  if (dataset.columns.empty()) {
    throw ValidationError("dataset has no candidate columns");
  }
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ValidationError("sample fraction must lie in (0, 1]");
  }
  constraints.Validate();
  std::vector<size_t> distinct;
  for (const auto& col : dataset.columns) distinct.push_back(DistinctCount(col));

  ColumnSelection sel;
  RowSample sample(n, seed);
  size_t k = static_cast<size_t>(std::ceil(fraction * static_cast<double>(n)));
  std::vector<size_t> eligible;
  while (true) {
    sample.GrowTo(k);
    const double limit = std::sqrt(static_cast<double>(sample.size()));
    eligible.clear();
    for (size_t c = 0; c < distinct.size(); ++c) {
      if (static_cast<double>(distinct[c]) <= limit) eligible.push_back(c);
    }
    if (!eligible.empty()) break;
    if (sample.size() >= n) {
      throw ValidationError(
          "no column has at most sqrt(t) distinct values even with every row "
          "labeled");
    }
    k = std::min(n, 2 * sample.size());
    ++sel.doublings;
  }

  double best = std::numeric_limits<double>::infinity();
  for (size_t c : eligible) {
    Grouping grouping = GroupBy(dataset.columns[c]);
    std::vector<int64_t> f(grouping.size(), 0), fp(grouping.size(), 0);
    for (size_t row : sample.rows()) {
      const int g = grouping.group_of_row[row];
      ++f[g];
      fp[g] += labels[row];
    }
    std::vector<GroupStats> groups;
    for (size_t g = 0; g < grouping.size(); ++g) {
      groups.push_back(MakeSampledGroup(
          grouping.ids[g], static_cast<int64_t>(grouping.members[g].size()),
          f[g], fp[g]));
    }
    const double estimate = EstimatedGreedyCost(groups, constraints, cost);
    sel.candidates.push_back(
        {dataset.columns[c].name, distinct[c], estimate});
    if (estimate < best) {
      best = estimate;
      sel.column = dataset.columns[c].name;
      sel.grouping = std::move(grouping);
      sel.groups = std::move(groups);
    }
  }
  sel.sample_rows.assign(sample.rows().begin(), sample.rows().end());
  return sel;
}

}  // namespace udfsel
