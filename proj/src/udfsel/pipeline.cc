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


#include "udfsel/pipeline.h"

#include <algorithm>
#include <cmath>

#include "udfsel/bigreedy.h"
#include "udfsel/convex.h"
#include "udfsel/exact.h"
#include "udfsel/harness.h"
#include "udfsel/logistic.h"
#include "udfsel/random.h"

namespace udfsel {

namespace {

// Streams derived from a trial seed.
constexpr uint64_t kSelectionStream = 1;
constexpr uint64_t kSamplerStream = 2;

Grouping SingleGroup(size_t rows) {
  Grouping g;
  g.column = "";
  g.ids = {"all"};
  g.group_of_row.assign(rows, 0);
  g.members.resize(1);
  for (size_t r = 0; r < rows; ++r) g.members[0].push_back(r);
  return g;
}

std::vector<GroupStats> TrueStats(const Grouping& grouping,
                                  const std::vector<uint8_t>& labels) {
  std::vector<GroupStats> groups;
  for (size_t g = 0; g < grouping.size(); ++g) {
    int64_t correct = 0;
    for (size_t row : grouping.members[g]) correct += labels[row];
    const auto t = static_cast<int64_t>(grouping.members[g].size());
    groups.push_back(MakeGroup(grouping.ids[g], t,
                               t > 0 ? static_cast<double>(correct) / t : 0.0));
  }
  return groups;
}

Strategy SolveExact(const Grouping& grouping,
                    const std::vector<uint8_t>& labels,
                    const Config& config) {
  PerfectInfoInstance inst;
  inst.constraints = config.constraints;
  inst.cost = config.cost;
  for (size_t g = 0; g < grouping.size(); ++g) {
    LabeledGroup lg;
    lg.id = grouping.ids[g];
    for (size_t row : grouping.members[g]) {
      (labels[row] ? lg.correct : lg.incorrect) += 1;
    }
    inst.groups.push_back(lg);
  }
  const ExactResult result = SolvePerfectInformation(inst);
  if (!result.feasible) {
    throw InfeasibleError("no deterministic strategy meets the constraints");
  }
  return result.strategy;
}

ConvexInstance MakeConvexInstance(const Config& config,
                                  std::vector<GroupStats> groups) {
  ConvexInstance inst;
  inst.groups = std::move(groups);
  inst.constraints = config.constraints;
  inst.cost = config.cost;
  if (config.solver == "convex-unknown") {
    inst.mode = CorrelationMode::kUnknown;
  } else if (config.solver == "convex-independent") {
    inst.mode = CorrelationMode::kIndependent;
  } else {
    inst.mode = CorrelationMode::kIndependent;
    inst.sampling_aware = true;
  }
  return inst;
}

}  // namespace

SyntheticSpec SpecFromConfig(const Config& config) {
  SyntheticSpec spec;
  if (config.synthetic_preset == "example") spec = ExampleSpec();
  if (config.synthetic_preset == "loan") spec = LoanAnalogSpec();
  spec.sizes = config.synthetic_sizes;
  spec.selectivities = config.synthetic_selectivities;
  if (spec.ids.size() != spec.sizes.size()) spec.ids.clear();
  spec.seed = config.seed;
  return spec;
}

Dataset LoadDataset(const Config& config) {
  config.Validate();
  if (config.synthetic()) return GenerateSynthetic(SpecFromConfig(config));
  return LoadCsv(config.dataset_path, config.label_column,
                 config.positive_value);
}

Grouping ChooseGrouping(const Config& config, const Dataset& dataset,
                        const std::vector<uint8_t>& labels, uint64_t seed,
                        std::vector<size_t>* sample_rows, Plan* plan) {
  const std::string& policy = config.column_policy;
  if (policy.rfind("fixed:", 0) == 0) {
    return GroupBy(dataset.Get(policy.substr(6)));
  }
  const uint64_t stream = StreamSeed(seed, kSelectionStream);
  if (policy == "auto") {
    ColumnSelection sel = SelectCorrelatedColumn(
        dataset, labels, config.constraints, config.cost, stream);
    *sample_rows = std::move(sel.sample_rows);
    plan->candidates = std::move(sel.candidates);
    plan->doublings = sel.doublings;
    return std::move(sel.grouping);
  }
  if (policy == "logreg") {
    const size_t n = dataset.rows();
    if (n == 0) throw ValidationError("dataset is empty");
    RowSample sample(n, stream);
    size_t k = static_cast<size_t>(std::ceil(0.01 * static_cast<double>(n)));
    while (true) {
      sample.GrowTo(k);
      size_t positive = 0;
      for (size_t row : sample.rows()) positive += labels[row];
      if ((positive > 0 && positive < sample.size()) || sample.size() >= n) {
        break;
      }
      k = std::min(n, 2 * sample.size());
      ++plan->doublings;
    }
    const VirtualColumnModel model =
        TrainVirtualColumn(dataset, labels, sample.rows());
    const std::vector<double> scores = model.ScoreAll(dataset);
    const std::vector<int> buckets = RankBuckets(scores);
    plan->bucket_edges = model.bucket_edges;
    sample_rows->assign(sample.rows().begin(), sample.rows().end());
    // Order the groups by bucket index rather than first appearance.
    Grouping grouping = GroupBy(BucketColumn(buckets, "bucket"));
    std::vector<size_t> order(grouping.size());
    for (size_t g = 0; g < order.size(); ++g) order[g] = g;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return std::stoi(grouping.ids[a]) < std::stoi(grouping.ids[b]);
    });
    Grouping sorted;
    sorted.column = grouping.column;
    sorted.group_of_row.resize(grouping.group_of_row.size());
    for (size_t g : order) {
      const int index = static_cast<int>(sorted.ids.size());
      sorted.ids.push_back(grouping.ids[g]);
      sorted.members.push_back(grouping.members[g]);
      for (size_t row : grouping.members[g]) sorted.group_of_row[row] = index;
    }
    return sorted;
  }
  throw ValidationError("column.policy: unknown policy '" + policy + "'");
}

Plan MakePlan(const Config& config, const Dataset& dataset,
              const std::vector<uint8_t>& labels, uint64_t seed,
              const Grouping* grouping) {
  config.Validate();
  if (labels.size() != dataset.rows()) {
    throw ValidationError("label count does not match the dataset");
  }
  const auto n = static_cast<int64_t>(dataset.rows());
  Plan plan;
  plan.sampled.assign(dataset.rows(), 0);

  if (config.solver == "naive") {
    plan.grouping = SingleGroup(dataset.rows());
    plan.groups = TrueStats(plan.grouping, labels);
    const int64_t k = NaiveCount(n, config.constraints.beta);
    const double f = n > 0 ? static_cast<double>(k) / n : 0.0;
    plan.strategy = Strategy::Uniform(1, f, f);
    plan.expected_cost = static_cast<double>(k) * config.cost.Full();
    return plan;
  }

  std::vector<size_t> sample_rows;
  if (grouping != nullptr) {
    plan.grouping = *grouping;
  } else {
    plan.grouping =
        ChooseGrouping(config, dataset, labels, seed, &sample_rows, &plan);
  }
  const Grouping& gr = plan.grouping;

  try {
    if (config.solver == "exact") {
      plan.groups = TrueStats(gr, labels);
      plan.strategy = SolveExact(gr, labels, config);
    } else if (config.solver == "bigreedy") {
      plan.groups = TrueStats(gr, labels);
      plan.strategy = SolveBiGreedy(plan.groups, config.constraints);
    } else {
      GroupSampler sampler(gr, labels, StreamSeed(seed, kSamplerStream));
      sampler.Adopt(sample_rows);
      const std::vector<int64_t> sizes = gr.Sizes();
      auto solve = [&]() {
        return SolveConvex(MakeConvexInstance(config, sampler.Stats()));
      };
      if (config.sampling_scheme == "adaptive") {
        const std::vector<double> grid =
            DefaultNumGrid(config.constraints.alpha);
        AdaptiveResult search;
        try {
          search = AdaptiveNumSearch(
              grid, [&](double num) -> std::optional<double> {
                sampler.ExtendTo(SampleBudget(
                    {SchemeKind::kTwoThirdPower, num}, sizes));
                try {
                  const ConvexResult r = solve();
                  return SamplingAwareCost(r.strategy, sampler.Stats(),
                                           config.cost);
                } catch (const InfeasibleError&) {
                  return std::nullopt;
                }
              });
        } catch (const InfeasibleError&) {
          plan.groups = sampler.Stats();
          plan.sampled = sampler.SampledMask();
          throw InfeasibleError("every adaptive sampling budget infeasible");
        }
        plan.chosen_num = search.best_num;
        plan.adaptive_steps = search.steps;
      } else {
        SamplingScheme scheme;
        if (config.sampling_scheme == "constant") {
          scheme = {SchemeKind::kConstant, config.sampling_param};
        } else {
          scheme = {SchemeKind::kTwoThirdPower, config.EffectiveNum()};
        }
        sampler.ExtendTo(SampleBudget(scheme, sizes));
      }
      plan.groups = sampler.Stats();
      plan.sampled = sampler.SampledMask();
      plan.strategy = solve().strategy;
    }
  } catch (const InfeasibleError& e) {
    if (plan.groups.empty()) plan.groups = TrueStats(gr, labels);
    plan.fallback = true;
    plan.fallback_reason = e.what();
    plan.strategy = Strategy::Uniform(gr.size(), 1.0, 1.0);
  }
  // Rows labeled while choosing the column but not adopted by a sampler
  // (exact and greedy solvers) are still paid for.
  for (size_t row : sample_rows) plan.sampled[row] = 1;
  if (config.solver == "exact" || config.solver == "bigreedy") {
    // Recompute tallies so the sampling-aware cost reflects those rows.
    std::vector<int64_t> f(gr.size(), 0), fp(gr.size(), 0);
    for (size_t row : sample_rows) {
      ++f[gr.group_of_row[row]];
      fp[gr.group_of_row[row]] += labels[row];
    }
    for (size_t g = 0; g < gr.size(); ++g) {
      plan.groups[g].sampled = f[g];
      plan.groups[g].sampled_positive = fp[g];
    }
  }
  plan.expected_cost =
      SamplingAwareCost(plan.strategy, plan.groups, config.cost);
  return plan;
}

ColumnReport SelectColumn(const Config& config) {
  const Dataset dataset = LoadDataset(config);
  ColumnReport report;
  report.policy = config.column_policy;
  std::vector<size_t> rows;
  const Grouping grouping = ChooseGrouping(config, dataset, dataset.labels,
                                           config.seed, &rows,
                                           &report.diagnostics);
  report.column = grouping.column;
  report.sample_size = rows.size();
  std::vector<int64_t> f(grouping.size(), 0), fp(grouping.size(), 0);
  for (size_t row : rows) {
    ++f[grouping.group_of_row[row]];
    fp[grouping.group_of_row[row]] += dataset.labels[row];
  }
  for (size_t g = 0; g < grouping.size(); ++g) {
    report.groups.push_back(MakeSampledGroup(
        grouping.ids[g], static_cast<int64_t>(grouping.members[g].size()), f[g],
        fp[g]));
  }
  return report;
}

}  // namespace udfsel
