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


// One planning pass: pick the grouping column, label samples where the solver
// needs estimates, and solve for a strategy. Shared by the plan command and by
// every trial of a run.

#ifndef UDFSEL_PIPELINE_H_
#define UDFSEL_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "udfsel/config.h"
#include "udfsel/core.h"
#include "udfsel/dataset.h"
#include "udfsel/estimation.h"

namespace udfsel {

// The synthetic spec described by a config, with the preset's group ids when
// the preset's shape is kept.
SyntheticSpec SpecFromConfig(const Config& config);

// The configured dataset: the CSV file or a synthetic table drawn with the
// master seed.
Dataset LoadDataset(const Config& config);

struct Plan {
  Grouping grouping;
  std::vector<GroupStats> groups;  // statistics the solver saw
  Strategy strategy;
  double expected_cost = 0.0;      // sampling-aware
  std::vector<uint8_t> sampled;    // per row, labeled during planning
  bool fallback = false;           // R = E = 1 used after a solver failure
  std::string fallback_reason;
  std::optional<double> chosen_num;        // adaptive scheme only
  std::vector<AdaptiveStep> adaptive_steps;
  std::vector<ColumnCandidate> candidates;  // auto policy only
  int doublings = 0;                        // auto policy only
  std::vector<double> bucket_edges;         // logreg policy only
};

// Grouping chosen by the column policy. `sample_rows` receives rows labeled
// while choosing; `plan` receives the policy's diagnostics.
Grouping ChooseGrouping(const Config& config, const Dataset& dataset,
                        const std::vector<uint8_t>& labels, uint64_t seed,
                        std::vector<size_t>* sample_rows, Plan* plan);

// Plans against `labels`. A non-null `grouping` skips the column policy.
// Solver infeasibility yields the R = E = 1 fallback; validation failures
// propagate.
Plan MakePlan(const Config& config, const Dataset& dataset,
              const std::vector<uint8_t>& labels, uint64_t seed,
              const Grouping* grouping = nullptr);

struct ColumnReport {
  std::string policy;
  std::string column;
  std::vector<GroupStats> groups;  // estimates from the labeled sample
  size_t sample_size = 0;
  Plan diagnostics;  // candidates, doublings and bucket edges
};

// Runs the column policy once on the configured data with the master seed.
ColumnReport SelectColumn(const Config& config);

}  // namespace udfsel

#endif  // UDFSEL_PIPELINE_H_
