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
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "udfsel/dataset.h"
#include "udfsel/estimation.h"
#include "udfsel/logistic.h"
#include "udfsel/random.h"

namespace udfsel {
namespace {

TEST(BetaPosteriorTest, MatchesClosedForm) {
  const Posterior p = BetaPosterior(100, 90);
  EXPECT_NEAR(p.mean, 91.0 / 102.0, 1e-12);
  EXPECT_NEAR(p.variance, 0.0009341, 1e-7);
  const Posterior prior = BetaPosterior(0, 0);
  EXPECT_DOUBLE_EQ(prior.mean, 0.5);
  EXPECT_NEAR(prior.variance, 1.0 / 12.0, 1e-15);
  const Posterior half = BetaPosterior(2, 1);
  EXPECT_DOUBLE_EQ(half.mean, 0.5);
  EXPECT_NEAR(half.variance, 0.05, 1e-15);
}

TEST(BetaPosteriorTest, StaysInsideUnitIntervalAndShrinks) {
  double previous = 1.0;
  for (int64_t f = 0; f <= 100000; f = f * 2 + 1) {
    for (int64_t fp : {int64_t{0}, f / 3, f}) {
      const Posterior p = BetaPosterior(f, fp);
      EXPECT_GT(p.mean, 0.0);
      EXPECT_LT(p.mean, 1.0);
      EXPECT_LE(p.variance, 1.0 / 12.0 + 1e-15);
    }
    const double v = BetaPosterior(f, f / 2).variance;
    EXPECT_LE(v, previous);
    previous = v;
  }
  EXPECT_LT(previous, 1e-5);
}

TEST(BetaPosteriorTest, RejectsBadTally) {
  EXPECT_THROW(BetaPosterior(3, 4), ValidationError);
  EXPECT_THROW(BetaPosterior(-1, 0), ValidationError);
}

TEST(SampleBudgetTest, TwoThirdPowerRule) {
  const std::vector<int64_t> sizes = {1000, 1000, 1000};
  const auto f = SampleBudget({SchemeKind::kTwoThirdPower, 2.0}, sizes);
  EXPECT_EQ(f, (std::vector<int64_t>{139, 139, 139}));
  // num = 2.5 alpha with alpha = 0.8.
  const auto g = SampleBudget({SchemeKind::kTwoThirdPower, 2.5 * 0.8}, sizes);
  EXPECT_EQ(g, f);
}

TEST(SampleBudgetTest, ConstantIsCappedAtGroupSize) {
  const std::vector<int64_t> sizes = {40, 500};
  EXPECT_EQ(SampleBudget({SchemeKind::kConstant, 100.0}, sizes),
            (std::vector<int64_t>{40, 100}));
}

TEST(SampleBudgetTest, FloorOfOneForTinyGroups) {
  const std::vector<int64_t> sizes = {1, 2, 100000};
  const auto f = SampleBudget({SchemeKind::kTwoThirdPower, 0.1}, sizes);
  EXPECT_EQ(f[0], 1);
  EXPECT_EQ(f[1], 1);
}

TEST(SampleBudgetTest, ScalesLinearlyInSizeAndAsTwoThirdsPowerAlone) {
  const std::vector<int64_t> sizes = {10000, 20000, 40000};
  const auto f = SampleBudget({SchemeKind::kTwoThirdPower, 3.0}, sizes);
  EXPECT_NEAR(static_cast<double>(f[1]) / f[0], 2.0, 0.01);
  EXPECT_NEAR(static_cast<double>(f[2]) / f[0], 4.0, 0.01);
  const std::vector<int64_t> one = {1000000};
  const std::vector<int64_t> eight = {8000000};
  const double a = SampleBudget({SchemeKind::kTwoThirdPower, 1.0}, one)[0];
  const double b = SampleBudget({SchemeKind::kTwoThirdPower, 1.0}, eight)[0];
  EXPECT_NEAR(b / a, 4.0, 1e-3);
}

TEST(SampleBudgetTest, RejectsNonPositiveParam) {
  const std::vector<int64_t> sizes = {10};
  EXPECT_THROW(SampleBudget({SchemeKind::kConstant, 0.0}, sizes),
               ValidationError);
}

TEST(AdaptiveSearchTest, StopsAfterTwoRises) {
  const std::vector<double> grid = {1, 2, 3, 4, 5, 6, 7};
  const std::vector<double> costs = {100, 80, 75, 78, 84, 10, 5};
  int calls = 0;
  const AdaptiveResult r = AdaptiveNumSearch(grid, [&](double num) {
    ++calls;
    return std::optional<double>(costs[static_cast<size_t>(num) - 1]);
  });
  EXPECT_EQ(calls, 5);
  EXPECT_EQ(r.best_index, 2u);
  EXPECT_DOUBLE_EQ(r.best_num, 3.0);
  EXPECT_DOUBLE_EQ(r.best_cost, 75.0);
  EXPECT_EQ(r.steps.size(), 5u);
}

TEST(AdaptiveSearchTest, MonotoneDecreasingReturnsLastPoint) {
  const std::vector<double> grid = DefaultNumGrid(0.8);
  const AdaptiveResult r = AdaptiveNumSearch(
      grid, [](double num) { return std::optional<double>(100.0 - num); });
  EXPECT_EQ(r.best_index, grid.size() - 1);
  EXPECT_DOUBLE_EQ(r.best_num, 4.0);
}

TEST(AdaptiveSearchTest, InfeasiblePointsCountAsRises) {
  const std::vector<double> grid = {1, 2, 3, 4};
  int calls = 0;
  const AdaptiveResult r =
      AdaptiveNumSearch(grid, [&](double num) -> std::optional<double> {
        ++calls;
        if (num == 1) return 50.0;
        if (num == 2) return 60.0;
        return std::nullopt;
      });
  EXPECT_EQ(calls, 3);
  EXPECT_EQ(r.best_index, 0u);
}

TEST(AdaptiveSearchTest, Errors) {
  const std::vector<double> empty;
  auto any = [](double) { return std::optional<double>(1.0); };
  EXPECT_THROW(AdaptiveNumSearch(empty, any), ValidationError);
  const std::vector<double> unsorted = {2, 1};
  EXPECT_THROW(AdaptiveNumSearch(unsorted, any), ValidationError);
  const std::vector<double> grid = {1, 2};
  EXPECT_THROW(AdaptiveNumSearch(
                   grid, [](double) { return std::optional<double>(); }),
               InfeasibleError);
}

TEST(DefaultNumGridTest, ScalesWithAlpha) {
  const std::vector<double> g = DefaultNumGrid(0.8);
  const std::vector<double> want = {0.4, 0.8, 1.2, 1.6, 2.0, 2.8, 4.0};
  ASSERT_EQ(g.size(), want.size());
  for (size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(g[i], want[i], 1e-12);
}

Dataset TwoGroupTable(uint64_t seed) {
  SyntheticSpec spec;
  spec.sizes = {300, 200};
  spec.selectivities = {0.7, 0.2};
  spec.seed = seed;
  return GenerateSynthetic(spec);
}

TEST(GroupSamplerTest, CumulativeWithoutReplacement) {
  const Dataset d = TwoGroupTable(5);
  const Grouping g = GroupBy(d.Get("group"));
  GroupSampler sampler(g, d.labels, 11);
  const std::vector<size_t> adopted = {0, 1, 2, 400};
  sampler.Adopt(adopted);
  EXPECT_EQ(sampler.sampled(0), 3);
  EXPECT_EQ(sampler.sampled(1), 1);
  sampler.ExtendTo(std::vector<int64_t>{10, 5});
  const std::vector<uint8_t> first = sampler.SampledMask();
  for (size_t row : adopted) EXPECT_TRUE(first[row]);
  sampler.ExtendTo(std::vector<int64_t>{50, 500});
  EXPECT_EQ(sampler.sampled(0), 50);
  EXPECT_EQ(sampler.sampled(1), 200);
  const std::vector<uint8_t> second = sampler.SampledMask();
  for (size_t r = 0; r < first.size(); ++r) {
    if (first[r]) EXPECT_TRUE(second[r]);
  }
  EXPECT_EQ(std::accumulate(second.begin(), second.end(), int64_t{0}),
            sampler.TotalSampled());
  int64_t positive = 0;
  for (size_t r : g.members[1]) positive += d.labels[r];
  EXPECT_EQ(sampler.positive(1), positive);
  const std::vector<GroupStats> stats = sampler.Stats();
  EXPECT_EQ(stats[1].sampled, 200);
  EXPECT_NEAR(stats[1].selectivity,
              BetaPosterior(200, positive).mean, 1e-15);
}

TEST(GroupSamplerTest, ShrinkingBudgetKeepsSamples) {
  const Dataset d = TwoGroupTable(6);
  const Grouping g = GroupBy(d.Get("group"));
  GroupSampler sampler(g, d.labels, 1);
  sampler.ExtendTo(std::vector<int64_t>{20, 20});
  sampler.ExtendTo(std::vector<int64_t>{5, 5});
  EXPECT_EQ(sampler.sampled(0), 20);
}

TEST(RowSampleTest, GrowsAsPrefix) {
  RowSample s(1000, 3);
  s.GrowTo(10);
  const std::vector<size_t> head(s.rows().begin(), s.rows().end());
  s.GrowTo(100);
  EXPECT_TRUE(std::equal(head.begin(), head.end(), s.rows().begin()));
  const std::set<size_t> unique(s.rows().begin(), s.rows().end());
  EXPECT_EQ(unique.size(), 100u);
  s.GrowTo(5000);
  EXPECT_EQ(s.size(), 1000u);
}

// A table with one column equal to the label and one independent uniform
// column with the same number of values.
Dataset PredictorTable(uint64_t seed, size_t n) {
  Rng rng(seed);
  Dataset d;
  Column predictor{"predictor", ColumnKind::kCategorical, {}, {}};
  Column noise{"noise", ColumnKind::kCategorical, {}, {}};
  for (size_t r = 0; r < n; ++r) {
    const bool label = rng.Bernoulli(0.4);
    d.labels.push_back(label);
    predictor.text.push_back(label ? "yes" : "no");
    noise.text.push_back(rng.Bernoulli(0.5) ? "x" : "y");
  }
  d.columns = {noise, predictor};
  return d;
}

TEST(SelectColumnTest, PrefersPerfectPredictor) {
  const Constraints q{0.8, 0.8, 0.8};
  int wins = 0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const Dataset d = PredictorTable(seed, 20000);
    const ColumnSelection sel =
        SelectCorrelatedColumn(d, d.labels, q, {}, StreamSeed(seed, 9));
    wins += sel.column == "predictor";
    ASSERT_EQ(sel.candidates.size(), 2u);
  }
  EXPECT_GE(wins, 18);
}

TEST(SelectColumnTest, ExcludesHighCardinalityColumns) {
  Dataset d = PredictorTable(1, 10000);
  Column id{"id", ColumnKind::kCategorical, {}, {}};
  for (size_t r = 0; r < d.rows(); ++r) id.text.push_back(std::to_string(r));
  d.columns.push_back(id);
  const ColumnSelection sel =
      SelectCorrelatedColumn(d, d.labels, {0.8, 0.8, 0.8}, {}, 1);
  for (const auto& c : sel.candidates) EXPECT_NE(c.name, "id");
  EXPECT_EQ(sel.sample_rows.size(), 100u);
  EXPECT_EQ(sel.doublings, 0);
}

TEST(SelectColumnTest, SingleCandidateWinsRegardlessOfCost) {
  Dataset d = PredictorTable(2, 5000);
  d.columns.erase(d.columns.begin() + 1);
  const ColumnSelection sel =
      SelectCorrelatedColumn(d, d.labels, {0.8, 0.8, 0.8}, {}, 2);
  EXPECT_EQ(sel.column, "noise");
  EXPECT_EQ(sel.grouping.size(), 2u);
}

TEST(SelectColumnTest, DoublesSampleUntilAColumnQualifies) {
  // 30 values need a labeled sample of at least 900 rows; 1% of 5000 is 50.
  Dataset d;
  Column c{"c30", ColumnKind::kCategorical, {}, {}};
  for (size_t r = 0; r < 5000; ++r) {
    c.text.push_back(std::to_string(r % 30));
    d.labels.push_back(r % 3 == 0);
  }
  d.columns = {c};
  const ColumnSelection sel =
      SelectCorrelatedColumn(d, d.labels, {0.8, 0.8, 0.8}, {}, 4);
  EXPECT_EQ(sel.column, "c30");
  EXPECT_EQ(sel.doublings, 5);  // 50 -> 100 -> ... -> 1600
  EXPECT_EQ(sel.sample_rows.size(), 1600u);
  int64_t labeled = 0;
  for (const auto& g : sel.groups) labeled += g.sampled;
  EXPECT_EQ(labeled, 1600);
}

TEST(SelectColumnTest, EmptyTableIsAnError) {
  Dataset d;
  d.columns.push_back({"a", ColumnKind::kCategorical, {}, {}});
  EXPECT_THROW(SelectCorrelatedColumn(d, d.labels, {}, {}, 0),
               ValidationError);
}

TEST(EstimatedGreedyCostTest, FallsBackToFullCost) {
  const std::vector<GroupStats> groups = {MakeSampledGroup("a", 100, 10, 0)};
  EXPECT_DOUBLE_EQ(EstimatedGreedyCost(groups, {0.9, 0.9, 0.8}, {}), 400.0);
}

// One numeric feature x ~ U(0, 1) with P(label | x) = x.
Dataset MonotoneTable(uint64_t seed, size_t n) {
  Rng rng(seed);
  Dataset d;
  Column x{"x", ColumnKind::kNumeric, {}, {}};
  for (size_t r = 0; r < n; ++r) {
    const double v = rng.Uniform();
    x.number.push_back(v);
    x.text.push_back(std::to_string(v));
    d.labels.push_back(rng.Bernoulli(v));
  }
  d.columns = {x};
  return d;
}

double Spearman(std::vector<double> a, std::vector<double> b) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](size_t i, size_t j) { return v[i] < v[j]; });
    std::vector<double> r(v.size());
    for (size_t i = 0; i < idx.size();) {
      size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      for (size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * (i + j);
      i = j + 1;
    }
    return r;
  };
  const std::vector<double> ra = ranks(a), rb = ranks(b);
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / ra.size();
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / rb.size();
  double num = 0, da = 0, db = 0;
  for (size_t i = 0; i < ra.size(); ++i) {
    num += (ra[i] - ma) * (rb[i] - mb);
    da += (ra[i] - ma) * (ra[i] - ma);
    db += (rb[i] - mb) * (rb[i] - mb);
  }
  return num / std::sqrt(da * db);
}

TEST(VirtualColumnTest, SeparableFeatureOrdersBuckets) {
  Rng rng(8);
  Dataset d;
  Column x{"x", ColumnKind::kNumeric, {}, {}};
  for (size_t r = 0; r < 2000; ++r) {
    const double v = rng.Uniform();
    x.number.push_back(v);
    x.text.push_back(std::to_string(v));
    d.labels.push_back(v > 0.5);
  }
  d.columns = {x};
  std::vector<size_t> sample(400);
  std::iota(sample.begin(), sample.end(), size_t{0});
  const VirtualColumnModel model = TrainVirtualColumn(d, d.labels, sample);
  EXPECT_GT(model.weights[0], 0.0);
  const std::vector<double> scores = model.ScoreAll(d);
  const std::vector<int> buckets = RankBuckets(scores);
  // Buckets follow feature order.
  for (size_t a = 0; a < d.rows(); ++a) {
    for (size_t b = a + 1; b < std::min<size_t>(d.rows(), a + 50); ++b) {
      if (x.number[a] < x.number[b]) EXPECT_LE(buckets[a], buckets[b]);
    }
  }
  ASSERT_EQ(model.bucket_edges.size(), 9u);
  for (size_t i = 0; i < 9; ++i) {
    EXPECT_GT(model.bucket_edges[i], 0.0);
    EXPECT_LT(model.bucket_edges[i], 1.0);
    if (i > 0) EXPECT_GT(model.bucket_edges[i], model.bucket_edges[i - 1]);
  }
  std::vector<double> pos(10, 0), cnt(10, 0);
  for (size_t r = 0; r < d.rows(); ++r) {
    pos[buckets[r]] += d.labels[r];
    cnt[buckets[r]] += 1;
  }
  EXPECT_GE(pos[9] / cnt[9], pos[0] / cnt[0]);
}

TEST(VirtualColumnTest, NoisyMonotoneFeatureGivesRankCorrelatedBuckets) {
  const Dataset d = MonotoneTable(21, 20000);
  RowSample sample(d.rows(), 3);
  sample.GrowTo(500);
  const VirtualColumnModel model =
      TrainVirtualColumn(d, d.labels, sample.rows());
  const std::vector<int> buckets = RankBuckets(model.ScoreAll(d));
  std::vector<double> pos(10, 0), cnt(10, 0), index(10);
  for (size_t r = 0; r < d.rows(); ++r) {
    pos[buckets[r]] += d.labels[r];
    cnt[buckets[r]] += 1;
  }
  for (int b = 0; b < 10; ++b) {
    index[b] = b;
    pos[b] /= cnt[b];
  }
  EXPECT_GE(Spearman(index, pos), 0.9);
}

TEST(VirtualColumnTest, OneHotNominalColumnsAndIgnoresWideOnes) {
  Rng rng(2);
  Dataset d;
  Column color{"color", ColumnKind::kCategorical, {}, {}};
  Column id{"id", ColumnKind::kCategorical, {}, {}};
  const char* names[] = {"red", "green", "blue"};
  for (size_t r = 0; r < 600; ++r) {
    const int c = static_cast<int>(rng.Below(3));
    color.text.push_back(names[c]);
    id.text.push_back("id" + std::to_string(r));
    d.labels.push_back(c == 0 ? rng.Bernoulli(0.9) : rng.Bernoulli(0.1));
  }
  d.columns = {color, id};
  std::vector<size_t> sample(600);
  std::iota(sample.begin(), sample.end(), size_t{0});
  const VirtualColumnModel model = TrainVirtualColumn(d, d.labels, sample);
  EXPECT_EQ(model.features.size(), 3u);
  for (const auto& f : model.features) EXPECT_EQ(f.column, 0);
}

TEST(VirtualColumnTest, SingleClassSampleCannotBeFit) {
  const Dataset d = MonotoneTable(1, 100);
  std::vector<uint8_t> ones(d.rows(), 1);
  std::vector<size_t> sample = {0, 1, 2};
  try {
    TrainVirtualColumn(d, ones, sample);
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "cannot fit classifier");
  }
}

TEST(RankBucketsTest, EqualScoresSplitIntoEqualBuckets) {
  const std::vector<double> scores(95, 0.3);
  const std::vector<int> buckets = RankBuckets(scores);
  std::vector<int> count(10, 0);
  for (int b : buckets) ++count[b];
  for (int c : count) EXPECT_TRUE(c == 9 || c == 10);
  // Ties keep input order.
  EXPECT_TRUE(std::is_sorted(buckets.begin(), buckets.end()));
}

TEST(RankBucketsTest, PopulationsDifferByAtMostOne) {
  Rng rng(4);
  for (size_t n : {10u, 11u, 99u, 1000u, 1234u}) {
    std::vector<double> scores(n);
    for (auto& s : scores) s = rng.Uniform();
    const std::vector<int> buckets = RankBuckets(scores);
    std::vector<int> count(10, 0);
    for (int b : buckets) ++count[b];
    const auto [lo, hi] = std::minmax_element(count.begin(), count.end());
    EXPECT_LE(*hi - *lo, 1) << n;
    const double expected = static_cast<double>(n) / 10.0;
    EXPECT_LE(std::abs(*lo - expected), 1.0);
  }
}

TEST(RankBucketsTest, BucketColumnUsesIndexNames) {
  const std::vector<int> buckets = {0, 9, 3};
  const Column c = BucketColumn(buckets, "b");
  EXPECT_EQ(c.text, (std::vector<std::string>{"0", "9", "3"}));
  EXPECT_EQ(c.kind, ColumnKind::kCategorical);
}

}  // namespace
}  // namespace udfsel
