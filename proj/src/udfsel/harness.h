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


// Probabilistic execution of a strategy against the label oracle, the naive
// baseline, repeated end-to-end trials and parameter sweeps.

#ifndef UDFSEL_HARNESS_H_
#define UDFSEL_HARNESS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "udfsel/config.h"
#include "udfsel/core.h"
#include "udfsel/dataset.h"

namespace udfsel {

struct TrialResult {
  double precision = 1.0;
  double recall = 1.0;
  double cost = 0.0;
  std::vector<RealizedCounts> counts;  // per group
  uint64_t seed = 0;
  bool fallback = false;

  int64_t Evaluations() const;
  int64_t Retrievals() const;
};

// Runs the strategy once. Rows marked in `sampled` were labeled during
// planning: they are charged o_r + o_e, output when correct and dropped
// otherwise. Every other row of group a is retrieved with probability R_a
// and, once retrieved, evaluated with probability E_a / R_a.
TrialResult ExecuteStrategy(const Grouping& grouping,
                            const std::vector<uint8_t>& labels,
                            const Strategy& strategy,
                            const std::vector<uint8_t>& sampled,
                            const CostModel& cost, uint64_t seed);

// Retrieves and evaluates ceil(beta n) uniformly chosen rows and outputs the
// correct ones.
TrialResult NaiveBaseline(const std::vector<uint8_t>& labels, double beta,
                          const CostModel& cost, uint64_t seed);

// ceil(beta n), ignoring rounding noise in beta n.
int64_t NaiveCount(int64_t rows, double beta);

struct Baseline {
  std::string name = "naive";
  double mean_cost = 0.0;
  double mean_evaluations = 0.0;
  double mean_retrievals = 0.0;
};

struct ExecutionReport {
  std::string solver;
  std::string column;  // grouping column of the first trial
  std::vector<std::string> group_ids;
  Strategy strategy;  // first trial's plan
  double expected_cost = 0.0;
  std::optional<double> chosen_num;
  std::vector<TrialResult> trials;
  // Fractions of trials with precision >= alpha and recall >= beta; absent
  // when no trial ran.
  std::optional<double> precision_satisfaction;
  std::optional<double> recall_satisfaction;
  std::optional<double> mean_cost;
  std::optional<double> mean_evaluations;
  std::optional<double> mean_retrievals;
  Baseline baseline;
  std::vector<std::string> flags;
};

// Runs config.trials independent end-to-end trials. Trial i uses the seed
// StreamSeed(config.seed, i); synthetic inputs redraw their labels per trial.
// Trials run in parallel; the report does not depend on scheduling.
ExecutionReport RunTrials(const Config& config);

struct SweepRow {
  double axis = 0.0;
  double mean_cost = 0.0;
  double mean_evaluations = 0.0;
  double mean_retrievals = 0.0;
  int trials = 0;
  std::string error;  // set when the point failed
};

// The config with one axis (num, c, alpha or beta) set to `value`. Throws
// ValidationError for an unknown axis.
Config ApplyAxis(const Config& config, const std::string& axis, double value);

// One RunTrials per grid point. Throws ValidationError on an empty grid, an
// unknown axis or an invalid point; runtime failures are recorded per row.
std::vector<SweepRow> Sweep(const Config& config, const std::string& axis,
                            std::span<const double> grid);

}  // namespace udfsel

#endif  // UDFSEL_HARNESS_H_
