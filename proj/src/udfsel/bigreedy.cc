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

#include "udfsel/bigreedy.h"

#include <algorithm>
#include <string>

namespace udfsel {

namespace {

constexpr double kTol = 1e-9;

double Total(std::span<const GroupStats> groups) {
  return static_cast<double>(TotalSize(groups));
}

}  // namespace

FeasibilityReport CheckFeasibility(std::span<const GroupStats> groups,
                                   const Constraints& constraints) {
  constraints.Validate();
  FeasibilityReport report;
  report.thresholds =
      HoeffdingThresholds(Total(groups), constraints.beta, constraints.rho);
  double prec = 0.0, rec = 0.0;
  for (const auto& g : groups) {
    const double t = static_cast<double>(g.size);
    prec += std::max(t * (g.selectivity - constraints.alpha), 0.0);
    rec += (1.0 - constraints.beta) * t * g.selectivity;
  }
  report.precision_slack = prec - report.thresholds.h_p;
  report.recall_slack = rec - report.thresholds.h_r;
  return report;
}

std::vector<size_t> SelectivityOrder(std::span<const GroupStats> groups) {
  std::vector<size_t> order(groups.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const auto& x = groups[a];
    const auto& y = groups[b];
    if (x.selectivity != y.selectivity) return x.selectivity > y.selectivity;
    if (x.size != y.size) return x.size > y.size;
    if (x.id != y.id) return x.id < y.id;
    return a < b;
  });
  return order;
}

Strategy SolveBiGreedy(std::span<const GroupStats> groups,
                       const Constraints& constraints) {
  const FeasibilityReport report = CheckFeasibility(groups, constraints);
  if (!report.precision_ok()) {
    throw InfeasibleError(
        "precision feasibility condition fails (slack " +
        std::to_string(report.precision_slack) + ")");
  }
  if (!report.recall_ok()) {
    throw InfeasibleError("recall feasibility condition fails (slack " +
                          std::to_string(report.recall_slack) + ")");
  }
  return FillBiGreedy(groups, constraints, report.thresholds);
}

Strategy FillBiGreedy(std::span<const GroupStats> groups,
                      const Constraints& constraints,
                      const Thresholds& thresholds) {
  for (const auto& g : groups) g.Validate();
  const double alpha = constraints.alpha;
  Strategy strategy = Strategy::Uniform(groups.size(), 0.0, 0.0);
  const std::vector<size_t> order = SelectivityOrder(groups);

  double total_ts = 0.0;
  for (const auto& g : groups) total_ts += g.size * g.selectivity;
  const double recall_target = constraints.beta * total_ts + thresholds.h_r;

  double recall = 0.0;
  for (size_t i : order) {
    if (recall >= recall_target - kTol) break;
    const double ts = groups[i].size * groups[i].selectivity;
    if (ts <= 0.0) continue;
    if (recall + ts >= recall_target) {
      strategy[i].retrieve = std::min(1.0, (recall_target - recall) / ts);
      recall = recall_target;
    } else {
      strategy[i].retrieve = 1.0;
      recall += ts;
    }
  }
  if (recall < recall_target - kTol) {
    throw InfeasibleError("recall target unreachable");
  }

  double precision = PrecisionMargin(strategy, groups, alpha);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (precision >= thresholds.h_p - kTol) break;
    const size_t i = *it;
    const double r = strategy[i].retrieve;
    const double gain =
        groups[i].size * (1.0 - groups[i].selectivity) * alpha * r;
    if (r <= 0.0 || gain <= 0.0) continue;
    const double need = thresholds.h_p - precision;
    if (gain >= need) {
      strategy[i].evaluate = std::min(r, r * need / gain);
      precision = thresholds.h_p;
    } else {
      strategy[i].evaluate = r;
      precision += gain;
    }
  }
  if (precision < thresholds.h_p - kTol) {
    throw InfeasibleError("precision target unreachable");
  }
  return strategy;
}

double TightnessGap(std::span<const GroupStats> groups,
                    const Constraints& constraints, const CostModel& cost) {
  constraints.Validate();
  if (constraints.alpha >= 1.0) {
    throw ValidationError("bound undefined at alpha=1");
  }
  double s_min = 0.0;
  for (const auto& g : groups) {
    if (g.selectivity > 0.0 && (s_min == 0.0 || g.selectivity < s_min)) {
      s_min = g.selectivity;
    }
  }
  if (s_min <= 0.0) {
    throw ValidationError("bound undefined without a nonzero selectivity");
  }
  const double n = Total(groups);
  const Thresholds a = HoeffdingThresholds(n, constraints.beta,
                                           constraints.rho);
  const Thresholds b = HoeffdingThresholds(n, constraints.beta,
                                           1.0 - constraints.rho);
  const double spread = std::max(a.h_r + b.h_r,
                                 (a.h_p + b.h_p) / (1.0 - constraints.alpha));
  return cost.Full() / s_min * spread;
}

}  // namespace udfsel
