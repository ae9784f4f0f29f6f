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

#include "udfsel/logistic.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace udfsel {

namespace {

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double FeatureValue(const Feature& f, const Dataset& ds, size_t row) {
  const Column& col = ds.columns[f.column];
  if (f.numeric) return (col.number[row] - f.mean) / f.scale;
  return col.text[row] == f.value ? 1.0 : 0.0;
}

}  // namespace

double VirtualColumnModel::Score(const Dataset& dataset, size_t row) const {
  double z = intercept;
  for (size_t j = 0; j < features.size(); ++j) {
    z += weights[j] * FeatureValue(features[j], dataset, row);
  }
  return Sigmoid(z);
}

std::vector<double> VirtualColumnModel::ScoreAll(const Dataset& dataset) const {
  std::vector<double> scores(dataset.rows());
  for (size_t r = 0; r < scores.size(); ++r) scores[r] = Score(dataset, r);
  return scores;
}

VirtualColumnModel TrainVirtualColumn(const Dataset& dataset,
                                      const std::vector<uint8_t>& labels,
                                      std::span<const size_t> sample_rows,
                                      const LogisticSettings& settings) {
  size_t positives = 0;
  for (size_t r : sample_rows) positives += labels[r];
  if (sample_rows.empty() || positives == 0 ||
      positives == sample_rows.size()) {
    throw std::runtime_error("cannot fit classifier");
  }

  VirtualColumnModel model;
  const double m = static_cast<double>(sample_rows.size());
  for (size_t c = 0; c < dataset.columns.size(); ++c) {
    const Column& col = dataset.columns[c];
    if (col.kind == ColumnKind::kNumeric) {
      Feature f;
      f.column = static_cast<int>(c);
      double sum = 0.0, sq = 0.0;
      for (size_t r : sample_rows) sum += col.number[r];
      f.mean = sum / m;
      for (size_t r : sample_rows) {
        sq += (col.number[r] - f.mean) * (col.number[r] - f.mean);
      }
      const double sd = std::sqrt(sq / m);
      f.scale = sd > 0.0 ? sd : 1.0;
      model.features.push_back(f);
    } else {
      const std::set<std::string> levels(col.text.begin(), col.text.end());
      if (levels.size() >= kMaxNominalValues) continue;
      for (const auto& level : levels) {
        Feature f;
        f.column = static_cast<int>(c);
        f.numeric = false;
        f.value = level;
        model.features.push_back(f);
      }
    }
  }

  // Design matrix over the sample.
  const size_t k = model.features.size();
  std::vector<std::vector<double>> x(sample_rows.size(), std::vector<double>(k));
  std::vector<double> y(sample_rows.size());
  for (size_t i = 0; i < sample_rows.size(); ++i) {
    for (size_t j = 0; j < k; ++j) {
      x[i][j] = FeatureValue(model.features[j], dataset, sample_rows[i]);
    }
    y[i] = labels[sample_rows[i]];
  }
  model.weights.assign(k, 0.0);
  std::vector<double> grad(k);
  for (int epoch = 1; epoch <= settings.epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
      double z = model.intercept;
      for (size_t j = 0; j < k; ++j) z += model.weights[j] * x[i][j];
      const double err = Sigmoid(z) - y[i];
      grad_b += err;
      for (size_t j = 0; j < k; ++j) grad[j] += err * x[i][j];
    }
    const double step = settings.learning_rate / std::sqrt(epoch);
    for (size_t j = 0; j < k; ++j) {
      model.weights[j] -=
          step * (grad[j] / m + settings.l2 * model.weights[j]);
    }
    model.intercept -= step * grad_b / m;
  }

  const std::vector<double> scores = model.ScoreAll(dataset);
  const std::vector<int> buckets = RankBuckets(scores);
  model.bucket_edges = BucketEdges(scores, buckets);
  return model;
}

std::vector<int> RankBuckets(std::span<const double> scores) {
  const size_t n = scores.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  std::vector<int> bucket(n);
  for (size_t rank = 0; rank < n; ++rank) {
    bucket[order[rank]] = static_cast<int>(rank * kBuckets / n);
  }
  return bucket;
}

std::vector<double> BucketEdges(std::span<const double> scores,
                                std::span<const int> buckets) {
  std::vector<double> lo(kBuckets, 2.0), hi(kBuckets, -1.0);
  for (size_t r = 0; r < scores.size(); ++r) {
    lo[buckets[r]] = std::min(lo[buckets[r]], scores[r]);
    hi[buckets[r]] = std::max(hi[buckets[r]], scores[r]);
  }
  std::vector<double> edges;
  for (int b = 0; b + 1 < kBuckets; ++b) {
    edges.push_back(0.5 * (hi[b] + lo[b + 1]));
  }
  return edges;
}

Column BucketColumn(std::span<const int> buckets, const std::string& name) {
  Column col;
  col.name = name;
  col.kind = ColumnKind::kCategorical;
  col.text.reserve(buckets.size());
  for (int b : buckets) col.text.push_back(std::to_string(b));
  return col;
}

}  // namespace udfsel
