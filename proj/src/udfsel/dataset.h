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

// In-memory table model: typed columns, a boolean label per row standing in
// for the expensive predicate, CSV loading, grouping by a column, and the
// synthetic generators used by the experiments.

#ifndef UDFSEL_DATASET_H_
#define UDFSEL_DATASET_H_

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

namespace udfsel {

enum class ColumnKind { kNumeric, kCategorical };

struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::kCategorical;
  std::vector<std::string> text;  // raw cell values
  std::vector<double> number;     // parsed values for numeric columns
};

struct Dataset {
  std::vector<Column> columns;  // every column except the label
  std::vector<uint8_t> labels;  // 1 when the predicate holds
  std::string label_column = "label";
  std::string positive_value = "1";

  size_t rows() const { return labels.size(); }
  // Index of the named column, or -1.
  int Find(const std::string& name) const;
  // Throws ValidationError naming the column when it is absent.
  const Column& Get(const std::string& name) const;
};

// Parses CSV text with a header row. Quoted fields may contain commas,
// doubled quotes and newlines. A column is numeric when every value parses
// as a finite decimal number.
Dataset ParseCsv(std::istream& in, const std::string& label_column,
                 const std::string& positive_value);
Dataset LoadCsv(const std::string& path, const std::string& label_column,
                const std::string& positive_value);

// Rows partitioned by the values of one column, in order of first
// appearance.
struct Grouping {
  std::string column;
  std::vector<std::string> ids;
  std::vector<int> group_of_row;
  std::vector<std::vector<size_t>> members;

  size_t size() const { return ids.size(); }
  std::vector<int64_t> Sizes() const;
};

Grouping GroupBy(const Column& column);
size_t DistinctCount(const Column& column);

struct SyntheticSpec {
  std::vector<int64_t> sizes;
  std::vector<double> selectivities;
  std::vector<std::string> ids;  // defaults to g0, g1, ...
  int noise_columns = 0;
  uint64_t seed = 0;

  void Validate() const;
  int64_t Total() const;
};

// A table with a categorical "group" column, a "label" column holding "1" or
// "0" drawn as Bernoulli(s_a) per tuple, and optional uniform numeric noise
// columns. Rows are laid out group by group.
Dataset GenerateSynthetic(const SyntheticSpec& spec);

// Fresh Bernoulli labels for the spec's row layout.
std::vector<uint8_t> DrawLabels(const SyntheticSpec& spec, uint64_t seed);

// Three groups of 1000 tuples with selectivities 0.9, 0.5 and 0.1.
SyntheticSpec ExampleSpec();

// Seven groups over 50000 tuples shaped like a loan table grouped by credit
// grade: overall selectivity 0.72, group size standard deviation 5233,
// selectivity standard deviation 0.13 and size-selectivity correlation 0.84.
SyntheticSpec LoanAnalogSpec();

}  // namespace udfsel

#endif  // UDFSEL_DATASET_H_
