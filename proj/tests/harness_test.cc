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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "udfsel/config.h"
#include "udfsel/dataset.h"
#include "udfsel/harness.h"
#include "udfsel/pipeline.h"
#include "udfsel/random.h"
#include "udfsel/report.h"

namespace udfsel {
namespace {

// Example table with exactly 900, 500 and 100 correct tuples.
struct Fixed {
  Grouping grouping;
  std::vector<uint8_t> labels;
};

Fixed ExampleTruth() {
  Fixed f;
  f.grouping.column = "group";
  f.grouping.ids = {"a", "b", "c"};
  f.grouping.members.resize(3);
  const int correct[] = {900, 500, 100};
  for (int g = 0; g < 3; ++g) {
    for (int i = 0; i < 1000; ++i) {
      f.grouping.members[g].push_back(f.labels.size());
      f.grouping.group_of_row.push_back(g);
      f.labels.push_back(i < correct[g]);
    }
  }
  return f;
}

TEST(ExecuteStrategyTest, FullEvaluationIsExact) {
  const Fixed f = ExampleTruth();
  const std::vector<uint8_t> none(f.labels.size(), 0);
  const TrialResult r = ExecuteStrategy(
      f.grouping, f.labels, Strategy::Uniform(3, 1, 1), none, {}, 1);
  EXPECT_DOUBLE_EQ(r.precision, 1.0);
  EXPECT_DOUBLE_EQ(r.recall, 1.0);
  EXPECT_DOUBLE_EQ(r.cost, 3000.0 * 4.0);
}

TEST(ExecuteStrategyTest, EmptyPlanOutputsNothing) {
  const Fixed f = ExampleTruth();
  const std::vector<uint8_t> none(f.labels.size(), 0);
  const TrialResult r = ExecuteStrategy(
      f.grouping, f.labels, Strategy::Uniform(3, 0, 0), none, {}, 1);
  EXPECT_DOUBLE_EQ(r.precision, 1.0);
  EXPECT_DOUBLE_EQ(r.recall, 0.0);
  EXPECT_DOUBLE_EQ(r.cost, 0.0);
}

TEST(ExecuteStrategyTest, ExamplePlanIsDeterministic) {
  const Fixed f = ExampleTruth();
  const std::vector<uint8_t> none(f.labels.size(), 0);
  Strategy st;
  st.decisions = {{1, 0}, {1, 1}, {0, 0}};
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const TrialResult r =
        ExecuteStrategy(f.grouping, f.labels, st, none, {}, seed);
    EXPECT_DOUBLE_EQ(r.precision, 1400.0 / 1500.0);
    EXPECT_DOUBLE_EQ(r.recall, 1400.0 / 1500.0);
    EXPECT_DOUBLE_EQ(r.cost, 2000.0 + 3000.0);
  }
}

TEST(ExecuteStrategyTest, SampledRowsAreChargedAndDecided) {
  const Fixed f = ExampleTruth();
  std::vector<uint8_t> sampled(f.labels.size(), 0);
  for (size_t r = 0; r < sampled.size(); r += 7) sampled[r] = 1;
  const TrialResult r = ExecuteStrategy(
      f.grouping, f.labels, Strategy::Uniform(3, 0, 0), sampled, {}, 3);
  int64_t sampled_count = 0, sampled_correct = 0;
  for (size_t i = 0; i < sampled.size(); ++i) {
    sampled_count += sampled[i];
    sampled_correct += sampled[i] && f.labels[i];
  }
  EXPECT_DOUBLE_EQ(r.cost, 4.0 * sampled_count);
  EXPECT_DOUBLE_EQ(r.precision, 1.0);
  int64_t output = 0;
  for (const auto& c : r.counts) output += c.Output();
  EXPECT_EQ(output, sampled_correct);
}

TEST(ExecuteStrategyTest, CountsMatchBinomialExpectations) {
  const Fixed f = ExampleTruth();
  const std::vector<uint8_t> none(f.labels.size(), 0);
  Strategy st;
  st.decisions = {{0.8, 0.3}, {0.5, 0.5}, {0.2, 0.05}};
  const double s[] = {0.9, 0.5, 0.1};
  const int trials = 500;
  std::vector<double> rp(3, 0), em(3, 0);
  for (int t = 0; t < trials; ++t) {
    const TrialResult r = ExecuteStrategy(f.grouping, f.labels, st, none,
                                          {1, 3}, StreamSeed(77, t));
    double retrieved = 0, evaluated = 0;
    for (int g = 0; g < 3; ++g) {
      rp[g] += r.counts[g].retrieved_correct;
      em[g] += r.counts[g].evaluated_incorrect;
      retrieved += r.counts[g].Retrieved();
      evaluated += r.counts[g].Evaluated();
    }
    ASSERT_DOUBLE_EQ(r.cost, retrieved + 3 * evaluated);
  }
  for (int g = 0; g < 3; ++g) {
    const double pr = s[g] * st[g].retrieve;
    const double pe = (1 - s[g]) * st[g].evaluate;
    const double sd_r = std::sqrt(1000 * pr * (1 - pr) / trials);
    const double sd_e = std::sqrt(1000 * pe * (1 - pe) / trials);
    EXPECT_NEAR(rp[g] / trials, 1000 * pr, 3 * sd_r) << g;
    EXPECT_NEAR(em[g] / trials, 1000 * pe, 3 * sd_e) << g;
  }
}

TEST(ExecuteStrategyTest, SameSeedSameResult) {
  const Fixed f = ExampleTruth();
  const std::vector<uint8_t> none(f.labels.size(), 0);
  Strategy st;
  st.decisions = {{0.7, 0.2}, {0.4, 0.1}, {0.1, 0.1}};
  const TrialResult a = ExecuteStrategy(f.grouping, f.labels, st, none, {}, 9);
  const TrialResult b = ExecuteStrategy(f.grouping, f.labels, st, none, {}, 9);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_EQ(a.cost, b.cost);
  EXPECT_DOUBLE_EQ(a.precision, Precision(a.counts));
  EXPECT_DOUBLE_EQ(a.recall, Recall(a.counts));
}

TEST(ExecuteStrategyTest, RejectsMismatchedStrategy) {
  const Fixed f = ExampleTruth();
  const std::vector<uint8_t> none(f.labels.size(), 0);
  EXPECT_THROW(ExecuteStrategy(f.grouping, f.labels, Strategy::Uniform(2, 1, 1),
                               none, {}, 1),
               ValidationError);
  Strategy bad = Strategy::Uniform(3, 0.5, 0.5);
  bad[1].evaluate = 0.9;
  EXPECT_THROW(ExecuteStrategy(f.grouping, f.labels, bad, none, {}, 1),
               ValidationError);
}

TEST(NaiveBaselineTest, CostAndExactness) {
  const Fixed f = ExampleTruth();
  const TrialResult r = NaiveBaseline(f.labels, 0.8, {1, 3}, 1);
  EXPECT_DOUBLE_EQ(r.cost, 9600.0);
  EXPECT_DOUBLE_EQ(r.precision, 1.0);
  const TrialResult all = NaiveBaseline(f.labels, 1.0, {1, 3}, 1);
  EXPECT_DOUBLE_EQ(all.precision, 1.0);
  EXPECT_DOUBLE_EQ(all.recall, 1.0);
  EXPECT_EQ(NaiveCount(3000, 0.7), 2100);  // no spurious round-up
  EXPECT_EQ(NaiveCount(10, 0.55), 6);
}

TEST(NaiveBaselineTest, RecallIsBetaOnAverage) {
  const Fixed f = ExampleTruth();
  const int trials = 500;
  double sum = 0, sum_sq = 0;
  for (int t = 0; t < trials; ++t) {
    const double r = NaiveBaseline(f.labels, 0.6, {}, StreamSeed(5, t)).recall;
    sum += r;
    sum_sq += r * r;
  }
  const double mean = sum / trials;
  // Hypergeometric: recall sd = sqrt(beta (1 - beta) / C * (n - C) / (n - 1)).
  const double sd =
      std::sqrt(0.6 * 0.4 / 1500.0 * (3000.0 - 1500.0) / 2999.0);
  EXPECT_NEAR(mean, 0.6, 3 * sd / std::sqrt(trials) + 1.0 / 1500.0);
}

TEST(SyntheticTest, ExampleSpecCountsAndMeans) {
  SyntheticSpec spec = ExampleSpec();
  spec.seed = 12;
  const Dataset d = GenerateSynthetic(spec);
  const Grouping g = GroupBy(d.Get("group"));
  ASSERT_EQ(g.size(), 3u);
  for (size_t a = 0; a < 3; ++a) {
    EXPECT_EQ(g.members[a].size(), 1000u);
    double pos = 0;
    for (size_t r : g.members[a]) pos += d.labels[r];
    const double s = spec.selectivities[a];
    EXPECT_NEAR(pos / 1000.0, s, 3 * std::sqrt(s * (1 - s) / 1000.0));
  }
  EXPECT_EQ(GenerateSynthetic(spec).labels, d.labels);
}

TEST(SyntheticTest, CertainGroupIsAllPositive) {
  SyntheticSpec spec;
  spec.sizes = {50, 50};
  spec.selectivities = {1.0, 0.0};
  spec.noise_columns = 2;
  const Dataset d = GenerateSynthetic(spec);
  for (size_t r = 0; r < 50; ++r) EXPECT_EQ(d.labels[r], 1);
  for (size_t r = 50; r < 100; ++r) EXPECT_EQ(d.labels[r], 0);
  EXPECT_EQ(d.Get("noise0").kind, ColumnKind::kNumeric);
  EXPECT_EQ(d.Get("noise1").kind, ColumnKind::kNumeric);
}

TEST(SyntheticTest, LoanAnalogMatchesTargetStatistics) {
  SyntheticSpec spec = LoanAnalogSpec();
  ASSERT_EQ(spec.sizes.size(), 7u);
  EXPECT_EQ(spec.Total(), 50000);
  double weighted = 0, mean = 0;
  for (size_t i = 0; i < 7; ++i) {
    weighted += spec.sizes[i] * spec.selectivities[i];
    mean += spec.selectivities[i] / 7;
  }
  EXPECT_NEAR(weighted / 50000, 0.72, 1e-9);
  double var = 0;
  for (double s : spec.selectivities) var += (s - mean) * (s - mean) / 7;
  EXPECT_NEAR(std::sqrt(var), 0.13, 1e-9);
  spec.seed = 3;
  const Dataset d = GenerateSynthetic(spec);
  const double overall =
      std::accumulate(d.labels.begin(), d.labels.end(), 0.0) / d.rows();
  EXPECT_NEAR(overall, 0.72, 3 * std::sqrt(0.72 * 0.28 / 50000));
  const Grouping g = GroupBy(d.Get("group"));
  for (size_t a = 0; a < 7; ++a) {
    double pos = 0;
    for (size_t r : g.members[a]) pos += d.labels[r];
    const double s = spec.selectivities[a];
    const double t = static_cast<double>(g.members[a].size());
    EXPECT_NEAR(pos / t, s, 4 * std::sqrt(s * (1 - s) / t)) << a;
  }
}

TEST(CsvTest, ParsesTypesQuotesAndLabels) {
  std::istringstream in(
      "x,name,label\n1.5,\"a, b\",yes\n2,\"say \"\"hi\"\"\",no\n-3e2,c,yes\n");
  const Dataset d = ParseCsv(in, "label", "yes");
  ASSERT_EQ(d.rows(), 3u);
  EXPECT_EQ(d.labels, (std::vector<uint8_t>{1, 0, 1}));
  EXPECT_EQ(d.Get("x").kind, ColumnKind::kNumeric);
  EXPECT_DOUBLE_EQ(d.Get("x").number[2], -300.0);
  EXPECT_EQ(d.Get("name").kind, ColumnKind::kCategorical);
  EXPECT_EQ(d.Get("name").text[0], "a, b");
  EXPECT_EQ(d.Get("name").text[1], "say \"hi\"");
  EXPECT_EQ(d.Find("label"), -1);
}

TEST(CsvTest, ErrorsNameTheProblem) {
  std::istringstream missing("a,b\n1,2\n");
  try {
    ParseCsv(missing, "outcome", "1");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("outcome"), std::string::npos);
  }
  std::istringstream ragged("a,label\n1,1\n2\n");
  EXPECT_THROW(ParseCsv(ragged, "label", "1"), ValidationError);
}

Config ExampleConfig() {
  Config c;
  c.Set("synthetic.preset", "example");
  c.Set("column.policy", "fixed:group");
  return c;
}

TEST(RunTrialsTest, ZeroTrialsLeavesRatesAbsent) {
  Config c = ExampleConfig();
  c.trials = 0;
  const ExecutionReport r = RunTrials(c);
  EXPECT_TRUE(r.trials.empty());
  EXPECT_FALSE(r.precision_satisfaction.has_value());
  EXPECT_FALSE(r.recall_satisfaction.has_value());
  EXPECT_FALSE(r.mean_cost.has_value());
  EXPECT_EQ(r.strategy.size(), 3u);
  EXPECT_NE(ReportJson(r).find("\"precision_satisfaction\": null"),
            std::string::npos);
}

TEST(RunTrialsTest, NaiveCostIsDeterministic) {
  Config c = ExampleConfig();
  c.solver = "naive";
  c.trials = 20;
  const ExecutionReport r = RunTrials(c);
  EXPECT_NEAR(*r.mean_cost, 9600.0, 96.0);
  EXPECT_DOUBLE_EQ(r.baseline.mean_cost, 9600.0);
  EXPECT_DOUBLE_EQ(r.expected_cost, 9600.0);
  EXPECT_DOUBLE_EQ(r.strategy[0].retrieve, 0.8);
}

TEST(RunTrialsTest, ConvexSamplingMeetsConstraints) {
  Config c = ExampleConfig();
  c.trials = 200;
  const ExecutionReport r = RunTrials(c);
  // One-sided 99% binomial slack below rho = 0.8.
  const double floor = 0.8 - 2.326 * std::sqrt(0.8 * 0.2 / 200);
  EXPECT_GE(*r.precision_satisfaction, floor);
  EXPECT_GE(*r.recall_satisfaction, floor);
  EXPECT_LT(*r.mean_cost, r.baseline.mean_cost);
  EXPECT_TRUE(r.flags.empty());
}

TEST(RunTrialsTest, EverySolverRuns) {
  for (const char* solver : {"exact", "bigreedy", "convex-unknown",
                             "convex-independent", "convex-sampling"}) {
    Config c = ExampleConfig();
    c.solver = solver;
    c.trials = 5;
    const ExecutionReport r = RunTrials(c);
    EXPECT_EQ(r.trials.size(), 5u) << solver;
    EXPECT_TRUE(r.flags.empty()) << solver;
    for (const auto& t : r.trials) {
      double retrieved = 0, evaluated = 0;
      for (const auto& cnt : t.counts) {
        retrieved += cnt.Retrieved();
        evaluated += cnt.Evaluated();
      }
      EXPECT_DOUBLE_EQ(t.cost, retrieved + 3 * evaluated) << solver;
    }
  }
}

TEST(RunTrialsTest, FallbackIsFlagged) {
  Config c = ExampleConfig();
  c.solver = "bigreedy";
  c.constraints = {0.99, 0.99, 0.99};
  c.trials = 3;
  const ExecutionReport r = RunTrials(c);
  ASSERT_EQ(r.flags.size(), 3u);
  EXPECT_NE(r.flags[0].find("fallback"), std::string::npos);
  for (const auto& t : r.trials) {
    EXPECT_TRUE(t.fallback);
    EXPECT_DOUBLE_EQ(t.precision, 1.0);
    EXPECT_DOUBLE_EQ(t.recall, 1.0);
  }
}

TEST(RunTrialsTest, AutoAndLogregPoliciesRun) {
  for (const char* policy : {"auto", "logreg"}) {
    Config c = ExampleConfig();
    c.column_policy = policy;
    c.trials = 4;
    const ExecutionReport r = RunTrials(c);
    EXPECT_EQ(r.trials.size(), 4u) << policy;
  }
}

TEST(RunTrialsTest, ReportsAreReproducible) {
  Config c = ExampleConfig();
  c.trials = 30;
  c.seed = 99;
  EXPECT_EQ(ReportJson(RunTrials(c)), ReportJson(RunTrials(c)));
  Config d = c;
  d.seed = 100;
  EXPECT_NE(ReportJson(RunTrials(c)), ReportJson(RunTrials(d)));
}

TEST(RunTrialsTest, CsvLabelsStayFixed) {
  const std::string path = ::testing::TempDir() + "/harness_table.csv";
  {
    std::ofstream out(path);
    out << "group,label\n";
    for (int i = 0; i < 600; ++i) {
      out << (i % 2 ? "odd" : "even") << "," << (i % 2 ? (i % 5 == 0) : 1)
          << "\n";
    }
  }
  Config c;
  c.dataset_path = path;
  c.column_policy = "fixed:group";
  c.solver = "exact";
  c.trials = 3;
  const ExecutionReport r = RunTrials(c);
  EXPECT_EQ(r.trials[0].counts, r.trials[1].counts);
  EXPECT_GE(r.trials[0].precision, 0.8);
  EXPECT_GE(r.trials[0].recall, 0.8);
}

TEST(PlanTest, MissingColumnsAreNamed) {
  Config c = ExampleConfig();
  c.column_policy = "fixed:grade";
  const Dataset d = LoadDataset(c);
  try {
    MakePlan(c, d, d.labels, 1);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("grade"), std::string::npos);
  }
}

TEST(PlanTest, LoanPlanBeatsNaive) {
  Config c;
  c.Set("synthetic.preset", "loan");
  c.Set("column.policy", "fixed:group");
  const Dataset d = LoadDataset(c);
  const Plan plan = MakePlan(c, d, d.labels, c.seed);
  EXPECT_FALSE(plan.fallback);
  EXPECT_LT(plan.expected_cost, 160000.0);
  EXPECT_EQ(plan.grouping.ids.front(), "A");
}

TEST(SweepTest, AxesAndErrors) {
  Config c = ExampleConfig();
  c.trials = 2;
  std::vector<double> grid;
  for (int i = 2; i <= 9; ++i) grid.push_back(i / 10.0);
  const std::vector<SweepRow> rows = Sweep(c, "alpha", grid);
  ASSERT_EQ(rows.size(), 8u);
  const std::string csv = SweepCsv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "axis,mean_cost,mean_evaluations,mean_retrievals,trials");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
  EXPECT_THROW(Sweep(c, "alpha", std::vector<double>{}), ValidationError);
  EXPECT_THROW(Sweep(c, "gamma", std::vector<double>{1}), ValidationError);
  EXPECT_THROW(Sweep(c, "beta", std::vector<double>{1.5}), ValidationError);
  const Config num = ApplyAxis(c, "num", 3.0);
  EXPECT_EQ(num.sampling_scheme, "two-third-power");
  EXPECT_FALSE(num.scale_with_alpha);
  EXPECT_DOUBLE_EQ(num.EffectiveNum(), 3.0);
  EXPECT_EQ(ApplyAxis(c, "c", 40).sampling_scheme, "constant");
}

}  // namespace
}  // namespace udfsel
