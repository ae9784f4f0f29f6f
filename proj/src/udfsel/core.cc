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

#include "udfsel/core.h"

#include <cmath>
#include <string>

namespace udfsel {

namespace {

bool InUnit(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

void Constraints::Validate() const {
  if (!InUnit(alpha)) throw ValidationError("alpha must lie in [0, 1]");
  if (!InUnit(beta)) throw ValidationError("beta must lie in [0, 1]");
  if (!(rho >= 0.0)) throw ValidationError("rho must be >= 0");
  if (!(rho < 1.0)) {
    throw ValidationError("satisfaction probability must be < 1");
  }
}

void CostModel::Validate() const {
  if (!(retrieve >= 0.0) || !std::isfinite(retrieve)) {
    throw ValidationError("cost.retrieve must be a nonnegative number");
  }
  if (!(evaluate >= 0.0) || !std::isfinite(evaluate)) {
    throw ValidationError("cost.evaluate must be a nonnegative number");
  }
}

void GroupStats::Validate() const {
  if (size < 1) throw ValidationError("group '" + id + "' has no tuples");
  if (!InUnit(selectivity)) {
    throw ValidationError("group '" + id + "' selectivity outside [0, 1]");
  }
  if (!(variance >= 0.0) ||
      variance > selectivity * (1.0 - selectivity) + 1e-12) {
    throw ValidationError("group '" + id + "' variance exceeds s(1-s)");
  }
  if (sampled < 0 || sampled > size || sampled_positive < 0 ||
      sampled_positive > sampled) {
    throw ValidationError("group '" + id + "' has an invalid sample tally");
  }
}

GroupStats MakeGroup(std::string id, int64_t size, double selectivity) {
  GroupStats g;
  g.id = std::move(id);
  g.size = size;
  g.selectivity = selectivity;
  return g;
}

GroupStats MakeSampledGroup(std::string id, int64_t size, int64_t sampled,
                            int64_t sampled_positive) {
  GroupStats g;
  g.id = std::move(id);
  g.size = size;
  g.sampled = sampled;
  g.sampled_positive = sampled_positive;
  g.selectivity = (sampled_positive + 1.0) / (sampled + 2.0);
  g.variance = g.selectivity * (1.0 - g.selectivity) / (sampled + 3.0);
  return g;
}

int64_t TotalSize(std::span<const GroupStats> groups) {
  int64_t n = 0;
  for (const auto& g : groups) n += g.size;
  return n;
}

Strategy Strategy::Uniform(size_t groups, double retrieve, double evaluate) {
  Strategy s;
  s.decisions.assign(groups, Decision{retrieve, evaluate});
  return s;
}

void Strategy::Validate(std::span<const GroupStats> groups) const {
  if (decisions.size() < groups.size()) {
    throw ValidationError("strategy has no decision for group '" +
                          groups[decisions.size()].id + "'");
  }
  if (decisions.size() > groups.size()) {
    throw ValidationError("strategy covers more groups than the instance");
  }
  for (size_t i = 0; i < groups.size(); ++i) {
    const Decision& d = decisions[i];
    if (!(d.evaluate >= 0.0) || !(d.evaluate <= d.retrieve) ||
        !(d.retrieve <= 1.0)) {
      throw ValidationError("group '" + groups[i].id +
                            "' violates 0 <= E <= R <= 1");
    }
  }
}

bool RealizedCounts::Valid() const {
  return retrieved_correct >= 0 && retrieved_incorrect >= 0 &&
         evaluated_correct >= 0 && evaluated_incorrect >= 0 &&
         evaluated_correct <= retrieved_correct &&
         evaluated_incorrect <= retrieved_incorrect &&
         retrieved_correct <= correct &&
         retrieved_correct + retrieved_incorrect <= size;
}

double Precision(std::span<const RealizedCounts> counts) {
  int64_t num = 0, den = 0;
  for (const auto& c : counts) {
    num += c.retrieved_correct;
    den += c.Output();
  }
  return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
}

double Recall(std::span<const RealizedCounts> counts) {
  int64_t num = 0, den = 0;
  for (const auto& c : counts) {
    num += c.retrieved_correct;
    den += c.correct;
  }
  return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
}

double RealizedCost(std::span<const RealizedCounts> counts,
                    const CostModel& cost) {
  int64_t retrieved = 0, evaluated = 0;
  for (const auto& c : counts) {
    retrieved += c.Retrieved();
    evaluated += c.Evaluated();
  }
  return cost.retrieve * static_cast<double>(retrieved) +
         cost.evaluate * static_cast<double>(evaluated);
}

double ExpectedCost(const Strategy& strategy,
                    std::span<const GroupStats> groups, const CostModel& cost) {
  strategy.Validate(groups);
  double total = 0.0;
  for (size_t i = 0; i < groups.size(); ++i) {
    total += static_cast<double>(groups[i].size) *
             (cost.retrieve * strategy[i].retrieve +
              cost.evaluate * strategy[i].evaluate);
  }
  return total;
}

double SamplingAwareCost(const Strategy& strategy,
                         std::span<const GroupStats> groups,
                         const CostModel& cost) {
  strategy.Validate(groups);
  double total = 0.0;
  for (size_t i = 0; i < groups.size(); ++i) {
    const double u = static_cast<double>(groups[i].Unsampled());
    total += u * (cost.retrieve * strategy[i].retrieve +
                  cost.evaluate * strategy[i].evaluate) +
             static_cast<double>(groups[i].sampled) * cost.Full();
  }
  return total;
}

}  // namespace udfsel
