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

#include "udfsel/dataset.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "udfsel/core.h"
#include "udfsel/random.h"

namespace udfsel {

namespace {

bool ParseNumber(const std::string& s, double* out) {
  if (s.empty()) return false;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, *out);
  return ec == std::errc() && ptr == end && std::isfinite(*out);
}

// Reads one CSV record; returns false at end of input.
bool ReadRecord(std::istream& in, std::vector<std::string>* fields,
                int64_t* line) {
  fields->clear();
  std::string field;
  bool quoted = false, any = false;
  char ch;
  while (in.get(ch)) {
    any = true;
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++*line;
        field.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields->push_back(std::move(field));
      field.clear();
    } else if (ch == '\n') {
      ++*line;
      fields->push_back(std::move(field));
      return true;
    } else if (ch != '\r') {
      field.push_back(ch);
    }
  }
  if (quoted) throw ValidationError("unterminated quoted field in CSV");
  if (!any) return false;
  fields->push_back(std::move(field));
  return true;
}

}  // namespace

int Dataset::Find(const std::string& name) const {
  for (size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

const Column& Dataset::Get(const std::string& name) const {
  const int i = Find(name);
  if (i < 0) throw ValidationError("no column named '" + name + "'");
  return columns[i];
}

Dataset ParseCsv(std::istream& in, const std::string& label_column,
                 const std::string& positive_value) {
  int64_t line = 1;
  std::vector<std::string> header, fields;
  if (!ReadRecord(in, &header, &line)) {
    throw ValidationError("CSV input is empty");
  }
  int label = -1;
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == label_column) label = static_cast<int>(i);
  }
  if (label < 0) {
    throw ValidationError("label column '" + label_column + "' not found");
  }
  Dataset ds;
  ds.label_column = label_column;
  ds.positive_value = positive_value;
  std::vector<int> slot(header.size(), -1);
  for (size_t i = 0; i < header.size(); ++i) {
    if (static_cast<int>(i) == label) continue;
    slot[i] = static_cast<int>(ds.columns.size());
    ds.columns.push_back(Column{header[i], ColumnKind::kCategorical, {}, {}});
  }
  while (true) {
    const int64_t at = line;
    if (!ReadRecord(in, &fields, &line)) break;
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != header.size()) {
      throw ValidationError("CSV line " + std::to_string(at) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(header.size()));
    }
    for (size_t i = 0; i < fields.size(); ++i) {
      if (static_cast<int>(i) == label) {
        ds.labels.push_back(fields[i] == positive_value ? 1 : 0);
      } else {
        ds.columns[slot[i]].text.push_back(std::move(fields[i]));
      }
    }
  }
  for (Column& col : ds.columns) {
    std::vector<double> numbers(col.text.size());
    bool numeric = !col.text.empty();
    for (size_t r = 0; r < col.text.size() && numeric; ++r) {
      numeric = ParseNumber(col.text[r], &numbers[r]);
    }
    if (numeric) {
      col.kind = ColumnKind::kNumeric;
      col.number = std::move(numbers);
    }
  }
  return ds;
}

Dataset LoadCsv(const std::string& path, const std::string& label_column,
                const std::string& positive_value) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open dataset '" + path + "'");
  return ParseCsv(in, label_column, positive_value);
}

std::vector<int64_t> Grouping::Sizes() const {
  std::vector<int64_t> sizes;
  for (const auto& m : members) sizes.push_back(static_cast<int64_t>(m.size()));
  return sizes;
}

Grouping GroupBy(const Column& column) {
  Grouping g;
  g.column = column.name;
  std::unordered_map<std::string, int> index;
  g.group_of_row.reserve(column.text.size());
  for (size_t r = 0; r < column.text.size(); ++r) {
    auto [it, inserted] =
        index.emplace(column.text[r], static_cast<int>(g.ids.size()));
    if (inserted) {
      g.ids.push_back(column.text[r]);
      g.members.emplace_back();
    }
    g.group_of_row.push_back(it->second);
    g.members[it->second].push_back(r);
  }
  return g;
}

size_t DistinctCount(const Column& column) {
  std::unordered_map<std::string, int> seen;
  for (const auto& v : column.text) seen.emplace(v, 0);
  return seen.size();
}

void SyntheticSpec::Validate() const {
  if (sizes.empty()) throw ValidationError("synthetic spec has no groups");
  if (sizes.size() != selectivities.size()) {
    throw ValidationError(
        "synthetic sizes and selectivities differ in length");
  }
  if (!ids.empty() && ids.size() != sizes.size()) {
    throw ValidationError("synthetic ids and sizes differ in length");
  }
  for (size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1) throw ValidationError("synthetic group size must be >= 1");
    if (!(selectivities[i] >= 0.0 && selectivities[i] <= 1.0)) {
      throw ValidationError("synthetic selectivity must lie in [0, 1]");
    }
  }
  if (noise_columns < 0) throw ValidationError("noise_columns must be >= 0");
}

int64_t SyntheticSpec::Total() const {
  return std::accumulate(sizes.begin(), sizes.end(), int64_t{0});
}

std::vector<uint8_t> DrawLabels(const SyntheticSpec& spec, uint64_t seed) {
  Rng rng(seed);
  std::vector<uint8_t> labels;
  labels.reserve(static_cast<size_t>(spec.Total()));
  for (size_t a = 0; a < spec.sizes.size(); ++a) {
    for (int64_t i = 0; i < spec.sizes[a]; ++i) {
      labels.push_back(rng.Bernoulli(spec.selectivities[a]) ? 1 : 0);
    }
  }
  return labels;
}

Dataset GenerateSynthetic(const SyntheticSpec& spec) {
  spec.Validate();
  Dataset ds;
  ds.labels = DrawLabels(spec, StreamSeed(spec.seed, 0));
  Column group{"group", ColumnKind::kCategorical, {}, {}};
  for (size_t a = 0; a < spec.sizes.size(); ++a) {
    const std::string id =
        spec.ids.empty() ? "g" + std::to_string(a) : spec.ids[a];
    group.text.insert(group.text.end(), static_cast<size_t>(spec.sizes[a]),
                      id);
  }
  ds.columns.push_back(std::move(group));
  for (int k = 0; k < spec.noise_columns; ++k) {
    Rng rng(StreamSeed(spec.seed, 1 + static_cast<uint64_t>(k)));
    Column noise{"noise" + std::to_string(k), ColumnKind::kNumeric, {}, {}};
    for (size_t r = 0; r < ds.rows(); ++r) {
      const double x = rng.Uniform();
      noise.number.push_back(x);
      std::ostringstream os;
      os.precision(17);
      os << x;
      noise.text.push_back(os.str());
    }
    ds.columns.push_back(std::move(noise));
  }
  return ds;
}

SyntheticSpec ExampleSpec() {
  SyntheticSpec spec;
  spec.sizes = {1000, 1000, 1000};
  spec.selectivities = {0.9, 0.5, 0.1};
  return spec;
}

SyntheticSpec LoanAnalogSpec() {
  constexpr int kGroups = 7;
  constexpr double kTotal = 50000, kSizeDev = 5233, kMean = 0.72,
                   kSelDev = 0.13, kCorr = 0.84;
  // Grade-shaped size profile (mid grades largest) and a selectivity trend
  // that falls with grade. Both are standardized; the trend is made
  // orthogonal to the sizes so the correlation comes out exact.
  const double shape[kGroups] = {9000, 15000, 13000, 7500, 3500, 1500, 500};
  auto standardize = [](std::vector<double> v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double ss = 0.0;
    for (double& x : v) {
      x -= m;
      ss += x * x;
    }
    const double sd = std::sqrt(ss / v.size());
    for (double& x : v) x /= sd;
    return v;
  };
  const std::vector<double> z =
      standardize(std::vector<double>(shape, shape + kGroups));
  std::vector<double> w(kGroups);
  for (int i = 0; i < kGroups; ++i) w[i] = -i;
  w = standardize(w);
  double wz = 0.0;
  for (int i = 0; i < kGroups; ++i) wz += w[i] * z[i];
  for (int i = 0; i < kGroups; ++i) w[i] -= wz / kGroups * z[i];
  w = standardize(w);

  SyntheticSpec spec;
  std::vector<double> sizes(kGroups);
  for (int i = 0; i < kGroups; ++i) {
    sizes[i] = kTotal / kGroups + kSizeDev * z[i];
    spec.sizes.push_back(std::llround(sizes[i]));
  }
  spec.sizes[1] += static_cast<int64_t>(kTotal) - spec.Total();
  std::vector<double> zs(kGroups);
  for (int i = 0; i < kGroups; ++i) {
    zs[i] = kCorr * z[i] + std::sqrt(1 - kCorr * kCorr) * w[i];
  }
  double weighted = 0.0;
  for (int i = 0; i < kGroups; ++i) {
    weighted += static_cast<double>(spec.sizes[i]) * zs[i];
  }
  const double base = kMean - kSelDev * weighted / kTotal;
  for (int i = 0; i < kGroups; ++i) {
    spec.selectivities.push_back(base + kSelDev * zs[i]);
    spec.ids.push_back(std::string(1, static_cast<char>('A' + i)));
  }
  return spec;
}

}  // namespace udfsel
