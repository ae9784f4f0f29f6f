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


#include "udfsel/harness.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <numeric>
#include <thread>

#include "udfsel/pipeline.h"
#include "udfsel/random.h"

namespace udfsel {

namespace {

constexpr uint64_t kLabelStream = 0;
constexpr uint64_t kExecutionStream = 3;

// Runs fn(0..count-1) on a small worker pool. The first exception by index
// is rethrown after all workers finish.
void ParallelFor(size_t count, const std::function<void(size_t)>& fn) {
  const size_t workers = std::min<size_t>(
      count, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::mutex mu;
  size_t next = 0;
  auto work = [&]() {
    while (true) {
      size_t i;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= count) return;
        i = next++;
      }
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void Finish(TrialResult* result, const CostModel& cost) {
  result->precision = Precision(result->counts);
  result->recall = Recall(result->counts);
  result->cost = RealizedCost(result->counts, cost);
}

double Mean(const std::vector<TrialResult>& trials,
            const std::function<double(const TrialResult&)>& f) {
  double sum = 0.0;
  for (const auto& t : trials) sum += f(t);
  return sum / static_cast<double>(trials.size());
}

}  // namespace

int64_t TrialResult::Evaluations() const {
  int64_t total = 0;
  for (const auto& c : counts) total += c.Evaluated();
  return total;
}

int64_t TrialResult::Retrievals() const {
  int64_t total = 0;
  for (const auto& c : counts) total += c.Retrieved();
  return total;
}

int64_t NaiveCount(int64_t rows, double beta) {
  const double k = std::ceil(beta * static_cast<double>(rows) - 1e-9);
  return std::clamp<int64_t>(static_cast<int64_t>(k), 0, rows);
}

TrialResult ExecuteStrategy(const Grouping& grouping,
                            const std::vector<uint8_t>& labels,
                            const Strategy& strategy,
                            const std::vector<uint8_t>& sampled,
                            const CostModel& cost, uint64_t seed) {
  if (strategy.size() != grouping.size()) {
    throw ValidationError("strategy covers " +
                          std::to_string(strategy.size()) + " groups, expected " +
                          std::to_string(grouping.size()));
  }
  if (labels.size() != grouping.group_of_row.size() ||
      sampled.size() != labels.size()) {
    throw ValidationError("labels, sample mask and grouping disagree in size");
  }
  for (size_t g = 0; g < strategy.size(); ++g) {
    const Decision& d = strategy[g];
    if (!(d.evaluate >= 0.0 && d.evaluate <= d.retrieve && d.retrieve <= 1.0)) {
      throw ValidationError("strategy for group '" + grouping.ids[g] +
                            "' violates 0 <= E <= R <= 1");
    }
  }
  TrialResult result;
  result.seed = seed;
  result.counts.resize(grouping.size());
  Rng rng(seed);
  for (size_t row = 0; row < labels.size(); ++row) {
    const int g = grouping.group_of_row[row];
    RealizedCounts& c = result.counts[g];
    const bool correct = labels[row] != 0;
    ++c.size;
    c.correct += correct;
    bool retrieved = true;
    bool evaluated = true;
    if (!sampled[row]) {
      const Decision& d = strategy[g];
      retrieved = rng.Bernoulli(d.retrieve);
      evaluated = retrieved && d.retrieve > 0.0 &&
                  rng.Bernoulli(d.evaluate / d.retrieve);
    }
    if (!retrieved) continue;
    (correct ? c.retrieved_correct : c.retrieved_incorrect) += 1;
    if (evaluated) (correct ? c.evaluated_correct : c.evaluated_incorrect) += 1;
  }
  Finish(&result, cost);
  return result;
}

TrialResult NaiveBaseline(const std::vector<uint8_t>& labels, double beta,
                          const CostModel& cost, uint64_t seed) {
  const auto n = static_cast<int64_t>(labels.size());
  const int64_t k = NaiveCount(n, beta);
  std::vector<size_t> order(labels.size());
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(seed);
  rng.ShuffleInto(&order, 0, static_cast<size_t>(k));
  TrialResult result;
  result.seed = seed;
  RealizedCounts c;
  c.size = n;
  for (uint8_t label : labels) c.correct += label;
  for (int64_t i = 0; i < k; ++i) {
    const bool correct = labels[order[i]] != 0;
    (correct ? c.retrieved_correct : c.retrieved_incorrect) += 1;
    (correct ? c.evaluated_correct : c.evaluated_incorrect) += 1;
  }
  result.counts = {c};
  Finish(&result, cost);
  return result;
}

ExecutionReport RunTrials(const Config& config) {
  config.Validate();
  const Dataset dataset = LoadDataset(config);
  const bool synthetic = config.synthetic();
  const SyntheticSpec spec = synthetic ? SpecFromConfig(config) : SyntheticSpec{};

  // A fixed column groups every trial the same way.
  std::optional<Grouping> fixed;
  if (config.solver != "naive" && config.column_policy.rfind("fixed:", 0) == 0) {
    fixed = GroupBy(dataset.Get(config.column_policy.substr(6)));
  }
  const Grouping* cached = fixed ? &*fixed : nullptr;

  ExecutionReport report;
  report.solver = config.solver;
  const auto n = static_cast<int64_t>(dataset.rows());
  const int64_t k = NaiveCount(n, config.constraints.beta);
  report.baseline.mean_cost = static_cast<double>(k) * config.cost.Full();
  report.baseline.mean_evaluations = static_cast<double>(k);
  report.baseline.mean_retrievals = static_cast<double>(k);

  auto labels_for = [&](uint64_t trial_seed) {
    return synthetic ? DrawLabels(spec, StreamSeed(trial_seed, kLabelStream))
                     : dataset.labels;
  };
  auto describe = [&](const Plan& plan) {
    report.column = plan.grouping.column;
    report.group_ids = plan.grouping.ids;
    report.strategy = plan.strategy;
    report.expected_cost = plan.expected_cost;
    report.chosen_num = plan.chosen_num;
  };

  if (config.trials == 0) {
    const uint64_t trial_seed = StreamSeed(config.seed, 0);
    describe(MakePlan(config, dataset, labels_for(trial_seed), trial_seed,
                      cached));
    return report;
  }

  const auto trials = static_cast<size_t>(config.trials);
  std::vector<TrialResult> results(trials);
  std::vector<std::string> reasons(trials);
  std::optional<Plan> first;
  ParallelFor(trials, [&](size_t i) {
    const uint64_t trial_seed = StreamSeed(config.seed, i);
    const std::vector<uint8_t> labels = labels_for(trial_seed);
    Plan plan = MakePlan(config, dataset, labels, trial_seed, cached);
    const uint64_t exec_seed = StreamSeed(trial_seed, kExecutionStream);
    TrialResult result =
        config.solver == "naive"
            ? NaiveBaseline(labels, config.constraints.beta, config.cost,
                            exec_seed)
            : ExecuteStrategy(plan.grouping, labels, plan.strategy,
                              plan.sampled, config.cost, exec_seed);
    result.seed = trial_seed;
    result.fallback = plan.fallback;
    reasons[i] = plan.fallback_reason;
    results[i] = std::move(result);
    if (i == 0) first = std::move(plan);
  });
  describe(*first);

  int precision_ok = 0, recall_ok = 0;
  for (size_t i = 0; i < trials; ++i) {
    precision_ok += results[i].precision >= config.constraints.alpha - 1e-12;
    recall_ok += results[i].recall >= config.constraints.beta - 1e-12;
    if (results[i].fallback) {
      report.flags.push_back("trial " + std::to_string(i) +
                             ": fallback R=E=1 (" + reasons[i] + ")");
    }
  }
  const double count = static_cast<double>(trials);
  report.precision_satisfaction = precision_ok / count;
  report.recall_satisfaction = recall_ok / count;
  report.mean_cost = Mean(results, [](const TrialResult& t) { return t.cost; });
  report.mean_evaluations = Mean(results, [](const TrialResult& t) {
    return static_cast<double>(t.Evaluations());
  });
  report.mean_retrievals = Mean(results, [](const TrialResult& t) {
    return static_cast<double>(t.Retrievals());
  });
  report.trials = std::move(results);
  return report;
}

Config ApplyAxis(const Config& config, const std::string& axis, double value) {
  Config c = config;
  if (axis == "num") {
    c.sampling_scheme = "two-third-power";
    c.sampling_param = value;
    c.scale_with_alpha = false;
  } else if (axis == "c") {
    c.sampling_scheme = "constant";
    c.sampling_param = value;
  } else if (axis == "alpha") {
    c.constraints.alpha = value;
  } else if (axis == "beta") {
    c.constraints.beta = value;
  } else {
    throw ValidationError("unknown sweep axis '" + axis +
                          "' (expected num, c, alpha or beta)");
  }
  return c;
}

std::vector<SweepRow> Sweep(const Config& config, const std::string& axis,
                            std::span<const double> grid) {
  if (grid.empty()) throw ValidationError("sweep grid is empty");
  std::vector<Config> points;
  for (double value : grid) {
    Config c = ApplyAxis(config, axis, value);
    c.Validate();
    points.push_back(std::move(c));
  }
  std::vector<SweepRow> rows;
  for (size_t i = 0; i < points.size(); ++i) {
    SweepRow row;
    row.axis = grid[i];
    try {
      const ExecutionReport report = RunTrials(points[i]);
      row.trials = static_cast<int>(report.trials.size());
      row.mean_cost = report.mean_cost.value_or(NAN);
      row.mean_evaluations = report.mean_evaluations.value_or(NAN);
      row.mean_retrievals = report.mean_retrievals.value_or(NAN);
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception& e) {
      row.error = e.what();
      row.mean_cost = row.mean_evaluations = row.mean_retrievals = NAN;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace udfsel
