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

// Run configuration: a flat file of dotted key = value lines with # comments.
// Command-line overrides use the same keys.

#ifndef UDFSEL_CONFIG_H_
#define UDFSEL_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "udfsel/core.h"

namespace udfsel {

struct Config {
  Constraints constraints;  // defaults alpha = beta = rho = 0.8
  CostModel cost;           // defaults o_r = 1, o_e = 3
  std::string solver = "convex-sampling";
  std::string column_policy = "auto";  // fixed:<name> | auto | logreg
  std::string sampling_scheme = "two-third-power";
  double sampling_param = 2.5;
  bool scale_with_alpha = true;  // num = param * alpha
  uint64_t seed = 1;
  int trials = 50;
  std::string dataset_path;
  std::string label_column = "label";
  std::string positive_value = "1";
  std::string synthetic_preset;  // example | loan, expands sizes/selectivities
  std::vector<int64_t> synthetic_sizes;
  std::vector<double> synthetic_selectivities;

  // Sets one key from its text form; throws ValidationError with the key
  // name on unknown keys or malformed values.
  void Set(const std::string& key, const std::string& value);
  // Parses key = value lines on top of the current values.
  void Parse(const std::string& text);
  void LoadFile(const std::string& path);
  // Canonical text form; Parse(Render()) reproduces the config exactly.
  std::string Render() const;
  // Cross-field validation (closed name sets, exactly one data source).
  void Validate() const;

  bool synthetic() const { return !synthetic_sizes.empty(); }
  // Raw num for the two-third-power scheme after alpha scaling.
  double EffectiveNum() const {
    return scale_with_alpha ? sampling_param * constraints.alpha
                            : sampling_param;
  }

  friend bool operator==(const Config&, const Config&) = default;
};

}  // namespace udfsel

#endif  // UDFSEL_CONFIG_H_
