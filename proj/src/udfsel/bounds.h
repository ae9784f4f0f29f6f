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

// Concentration thresholds and the expected-margin and deviation algebra that
// every solver uses to state its constraints.

#ifndef UDFSEL_BOUNDS_H_
#define UDFSEL_BOUNDS_H_

#include <span>

#include "udfsel/core.h"

namespace udfsel {

struct Thresholds {
  double h_p = 0.0;    // precision slack
  double h_r = 0.0;    // recall slack
  double e_rho = 1.0;  // Chebyshev multiplier 1/sqrt(1 - rho)
};

enum class CorrelationMode { kUnknown, kIndependent };

// h_p = sqrt(ln(1/(1-rho)) n / 2), h_r = sqrt(ln(1/(1-rho)) n (1-beta) / 2).
Thresholds HoeffdingThresholds(double n_total, double beta, double rho);

// Expected value of the linearized precision constraint:
// sum_a t_a s_a (1-alpha) R_a + t_a (1-s_a) alpha (E_a - R_a).
double PrecisionMargin(const Strategy& strategy,
                       std::span<const GroupStats> groups, double alpha);

// Expected value of the linearized recall constraint:
// sum_a t_a s_a R_a - beta sum_a t_a s_a.
double RecallMargin(const Strategy& strategy,
                    std::span<const GroupStats> groups, double beta);

// Upper bounds on the standard deviation of the precision and recall
// constraint sums when each s_a is itself uncertain with variance v_a.
double DeviationBoundPrecision(const Strategy& strategy,
                               std::span<const GroupStats> groups,
                               double alpha, CorrelationMode mode);
double DeviationBoundRecall(const Strategy& strategy,
                            std::span<const GroupStats> groups, double beta,
                            CorrelationMode mode);

// Variants over explicit per-group sizes, used where the effective size of a
// group differs from its tuple count (already-sampled tuples are excluded).
double DeviationBoundPrecision(const Strategy& strategy,
                               std::span<const GroupStats> groups,
                               std::span<const double> sizes, double alpha,
                               CorrelationMode mode);
double DeviationBoundRecall(const Strategy& strategy,
                            std::span<const GroupStats> groups,
                            std::span<const double> sizes, double beta,
                            CorrelationMode mode);

}  // namespace udfsel

#endif  // UDFSEL_BOUNDS_H_
