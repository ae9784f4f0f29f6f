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

#include "udfsel/bounds.h"

#include <cmath>
#include <vector>

namespace udfsel {

namespace {

std::vector<double> Sizes(std::span<const GroupStats> groups) {
  std::vector<double> t;
  t.reserve(groups.size());
  for (const auto& g : groups) t.push_back(static_cast<double>(g.size));
  return t;
}

// Combines per-group (weight, t) terms into either bound form. `coef` is the
// factor multiplying t_a sqrt(v_a) in the group's deviation.
template <typename Coef>
double Deviation(std::span<const GroupStats> groups,
                 std::span<const double> sizes, CorrelationMode mode,
                 Coef coef) {
  double total = 0.0;
  for (size_t i = 0; i < groups.size(); ++i) {
    const double t = sizes[i];
    const double c = coef(i);
    if (mode == CorrelationMode::kUnknown) {
      total += std::sqrt(groups[i].variance) * t * std::abs(c) +
               0.5 * std::sqrt(t);
    } else {
      total += t * t * groups[i].variance * c * c + 0.25 * t;
    }
  }
  return mode == CorrelationMode::kUnknown ? total : std::sqrt(total);
}

}  // namespace

Thresholds HoeffdingThresholds(double n_total, double beta, double rho) {
  if (!(rho < 1.0)) {
    throw ValidationError("satisfaction probability must be < 1");
  }
  if (!(rho >= 0.0)) throw ValidationError("rho must be >= 0");
  if (!(n_total >= 0.0)) throw ValidationError("tuple count must be >= 0");
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw ValidationError("beta must lie in [0, 1]");
  }
  const double log_term = -std::log1p(-rho);
  Thresholds th;
  th.h_p = std::sqrt(log_term * n_total / 2.0);
  th.h_r = std::sqrt(log_term * n_total * (1.0 - beta) / 2.0);
  th.e_rho = 1.0 / std::sqrt(1.0 - rho);
  return th;
}

double PrecisionMargin(const Strategy& strategy,
                       std::span<const GroupStats> groups, double alpha) {
  double g = 0.0;
  for (size_t i = 0; i < groups.size(); ++i) {
    const double t = static_cast<double>(groups[i].size);
    const double s = groups[i].selectivity;
    const double r = strategy[i].retrieve, e = strategy[i].evaluate;
    g += t * s * (1.0 - alpha) * r + t * (1.0 - s) * alpha * (e - r);
  }
  return g;
}

double RecallMargin(const Strategy& strategy,
                    std::span<const GroupStats> groups, double beta) {
  double g = 0.0;
  for (size_t i = 0; i < groups.size(); ++i) {
    const double ts = static_cast<double>(groups[i].size) *
                      groups[i].selectivity;
    g += ts * strategy[i].retrieve - beta * ts;
  }
  return g;
}

double DeviationBoundPrecision(const Strategy& strategy,
                               std::span<const GroupStats> groups,
                               double alpha, CorrelationMode mode) {
  const auto t = Sizes(groups);
  return DeviationBoundPrecision(strategy, groups, t, alpha, mode);
}

double DeviationBoundRecall(const Strategy& strategy,
                            std::span<const GroupStats> groups, double beta,
                            CorrelationMode mode) {
  const auto t = Sizes(groups);
  return DeviationBoundRecall(strategy, groups, t, beta, mode);
}

double DeviationBoundPrecision(const Strategy& strategy,
                               std::span<const GroupStats> groups,
                               std::span<const double> sizes, double alpha,
                               CorrelationMode mode) {
  return Deviation(groups, sizes, mode, [&](size_t i) {
    return strategy[i].retrieve - alpha * strategy[i].evaluate;
  });
}

double DeviationBoundRecall(const Strategy& strategy,
                            std::span<const GroupStats> groups,
                            std::span<const double> sizes, double beta,
                            CorrelationMode mode) {
  return Deviation(groups, sizes, mode,
                   [&](size_t i) { return strategy[i].retrieve - beta; });
}

}  // namespace udfsel
