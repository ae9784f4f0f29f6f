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

// A learned correlated column: a logistic regression over the table's usable
// columns, fit on a labeled sample, whose scores are cut into ten
// equal-sized buckets.

#ifndef UDFSEL_LOGISTIC_H_
#define UDFSEL_LOGISTIC_H_

#include <span>
#include <string>
#include <vector>

#include "udfsel/dataset.h"

namespace udfsel {

inline constexpr int kBuckets = 10;
inline constexpr size_t kMaxNominalValues = 50;

struct Feature {
  int column = -1;
  bool numeric = true;
  double mean = 0.0;   // numeric: standardization over the sample
  double scale = 1.0;
  std::string value;   // nominal: the one-hot level
};

struct VirtualColumnModel {
  std::vector<Feature> features;
  std::vector<double> weights;  // one per feature
  double intercept = 0.0;
  std::vector<double> bucket_edges;  // kBuckets - 1 score cut points

  // Predicted probability for one row.
  double Score(const Dataset& dataset, size_t row) const;
  std::vector<double> ScoreAll(const Dataset& dataset) const;
};

struct LogisticSettings {
  int epochs = 2000;
  double learning_rate = 0.1;  // decays as 1 / sqrt(epoch)
  double l2 = 1e-4;
};

// Fits the model on the labeled rows by full-batch gradient descent and sets
// the bucket edges from the scores of the whole table. Numeric columns are
// standardized; nominal columns with fewer than 50 distinct values are one-hot
// encoded; other columns are ignored. Throws std::runtime_error("cannot fit
// classifier") when the sample holds a single class.
VirtualColumnModel TrainVirtualColumn(const Dataset& dataset,
                                      const std::vector<uint8_t>& labels,
                                      std::span<const size_t> sample_rows,
                                      const LogisticSettings& settings = {});

// Bucket index per row from rank deciles of the scores: rows are ordered by
// score with ties kept in row order, and bucket k holds ranks
// [k n / 10, (k + 1) n / 10).
std::vector<int> RankBuckets(std::span<const double> scores);

// Midpoints between the largest score of each bucket and the smallest score
// of the next.
std::vector<double> BucketEdges(std::span<const double> scores,
                                std::span<const int> buckets);

// The bucket ids as a categorical column named `name` with values "0".."9".
Column BucketColumn(std::span<const int> buckets, const std::string& name);

}  // namespace udfsel

#endif  // UDFSEL_LOGISTIC_H_
