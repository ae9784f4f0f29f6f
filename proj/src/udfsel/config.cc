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

#include "udfsel/config.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "udfsel/dataset.h"

namespace udfsel {

namespace {

std::string Trim(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void Bad(const std::string& key, const std::string& why) {
  throw ValidationError(key + ": " + why);
}

double ToDouble(const std::string& key, const std::string& v) {
  double x = 0.0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (v.empty() || ec != std::errc() || ptr != end || !std::isfinite(x)) {
    Bad(key, "expected a number, got '" + v + "'");
  }
  return x;
}

int64_t ToInt(const std::string& key, const std::string& v) {
  int64_t x = 0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (v.empty() || ec != std::errc() || ptr != end) {
    Bad(key, "expected an integer, got '" + v + "'");
  }
  return x;
}

std::vector<std::string> SplitList(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    item = Trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string Num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  // Prefer the shortest form that still round-trips.
  for (int digits = 1; digits <= 17; ++digits) {
    char shorter[64];
    std::snprintf(shorter, sizeof(shorter), "%.*g", digits, x);
    if (std::strtod(shorter, nullptr) == x) return shorter;
  }
  return buf;
}

}  // namespace

void Config::Set(const std::string& raw_key, const std::string& raw_value) {
  const std::string key = Trim(raw_key);
  const std::string v = Trim(raw_value);
  if (key == "alpha") {
    constraints.alpha = ToDouble(key, v);
  } else if (key == "beta") {
    constraints.beta = ToDouble(key, v);
  } else if (key == "rho") {
    constraints.rho = ToDouble(key, v);
  } else if (key == "cost.retrieve") {
    cost.retrieve = ToDouble(key, v);
  } else if (key == "cost.evaluate") {
    cost.evaluate = ToDouble(key, v);
  } else if (key == "solver") {
    solver = v;
  } else if (key == "column.policy") {
    column_policy = v;
  } else if (key == "sampling.scheme") {
    sampling_scheme = v;
  } else if (key == "sampling.param") {
    sampling_param = ToDouble(key, v);
  } else if (key == "sampling.scale_with_alpha") {
    if (v == "true" || v == "1") {
      scale_with_alpha = true;
    } else if (v == "false" || v == "0") {
      scale_with_alpha = false;
    } else {
      Bad(key, "expected true or false, got '" + v + "'");
    }
  } else if (key == "seed") {
    const int64_t s = ToInt(key, v);
    if (s < 0) Bad(key, "must be nonnegative");
    seed = static_cast<uint64_t>(s);
  } else if (key == "trials") {
    const int64_t t = ToInt(key, v);
    if (t < 0 || t > 1000000) Bad(key, "must lie in [0, 1000000]");
    trials = static_cast<int>(t);
  } else if (key == "dataset.path") {
    dataset_path = v;
  } else if (key == "dataset.label_column") {
    label_column = v;
  } else if (key == "dataset.positive_value") {
    positive_value = v;
  } else if (key == "synthetic.preset") {
    synthetic_preset = v;
    if (v == "example" || v == "loan") {
      const SyntheticSpec spec = v == "example" ? ExampleSpec()
                                                : LoanAnalogSpec();
      synthetic_sizes = spec.sizes;
      synthetic_selectivities = spec.selectivities;
    }
  } else if (key == "synthetic.sizes") {
    synthetic_sizes.clear();
    for (const auto& item : SplitList(v)) {
      synthetic_sizes.push_back(ToInt(key, item));
    }
  } else if (key == "synthetic.selectivities") {
    synthetic_selectivities.clear();
    for (const auto& item : SplitList(v)) {
      synthetic_selectivities.push_back(ToDouble(key, item));
    }
  } else {
    throw ValidationError("unknown config key '" + key + "'");
  }
}

void Config::Parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(number) +
                            ": expected key = value");
    }
    Set(line.substr(0, eq), line.substr(eq + 1));
  }
}

void Config::LoadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  Parse(buf.str());
}

std::string Config::Render() const {
  std::ostringstream out;
  out << "alpha = " << Num(constraints.alpha) << "\n";
  out << "beta = " << Num(constraints.beta) << "\n";
  out << "rho = " << Num(constraints.rho) << "\n";
  out << "cost.retrieve = " << Num(cost.retrieve) << "\n";
  out << "cost.evaluate = " << Num(cost.evaluate) << "\n";
  out << "solver = " << solver << "\n";
  out << "column.policy = " << column_policy << "\n";
  out << "sampling.scheme = " << sampling_scheme << "\n";
  out << "sampling.param = " << Num(sampling_param) << "\n";
  out << "sampling.scale_with_alpha = "
      << (scale_with_alpha ? "true" : "false") << "\n";
  out << "seed = " << seed << "\n";
  out << "trials = " << trials << "\n";
  out << "dataset.path = " << dataset_path << "\n";
  out << "dataset.label_column = " << label_column << "\n";
  out << "dataset.positive_value = " << positive_value << "\n";
  out << "synthetic.preset = " << synthetic_preset << "\n";
  out << "synthetic.sizes = ";
  for (size_t i = 0; i < synthetic_sizes.size(); ++i) {
    out << (i ? "," : "") << synthetic_sizes[i];
  }
  out << "\nsynthetic.selectivities = ";
  for (size_t i = 0; i < synthetic_selectivities.size(); ++i) {
    out << (i ? "," : "") << Num(synthetic_selectivities[i]);
  }
  out << "\n";
  return out.str();
}

void Config::Validate() const {
  try {
    constraints.Validate();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("constraints: ") + e.what());
  }
  try {
    cost.Validate();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("cost: ") + e.what());
  }
  static const char* kSolvers[] = {"exact",          "bigreedy",
                                   "convex-unknown", "convex-independent",
                                   "convex-sampling", "naive"};
  bool known = false;
  for (const char* s : kSolvers) known = known || solver == s;
  if (!known) {
    Bad("solver",
        "unknown solver '" + solver +
            "' (expected exact, bigreedy, convex-unknown, convex-independent, "
            "convex-sampling or naive)");
  }
  if (sampling_scheme != "constant" && sampling_scheme != "two-third-power" &&
      sampling_scheme != "adaptive") {
    Bad("sampling.scheme", "unknown scheme '" + sampling_scheme +
                               "' (expected constant, two-third-power or "
                               "adaptive)");
  }
  if (!(sampling_param > 0.0)) Bad("sampling.param", "must be positive");
  const bool fixed = column_policy.rfind("fixed:", 0) == 0;
  if (fixed && column_policy.size() == 6) {
    Bad("column.policy", "fixed: needs a column name");
  }
  if (!fixed && column_policy != "auto" && column_policy != "logreg") {
    Bad("column.policy", "unknown policy '" + column_policy +
                             "' (expected fixed:<name>, auto or logreg)");
  }
  if (!synthetic_preset.empty() && synthetic_preset != "example" &&
      synthetic_preset != "loan") {
    Bad("synthetic.preset",
        "unknown preset '" + synthetic_preset + "' (expected example or loan)");
  }
  const bool has_synthetic =
      !synthetic_preset.empty() || !synthetic_sizes.empty() ||
      !synthetic_selectivities.empty();
  if (has_synthetic == !dataset_path.empty()) {
    Bad("dataset.path",
        "exactly one of dataset.path and a synthetic block must be given");
  }
  if (has_synthetic && synthetic_sizes.empty()) {
    Bad("synthetic.sizes", "the synthetic block needs group sizes");
  }
  if (synthetic_sizes.size() != synthetic_selectivities.size()) {
    Bad("synthetic.sizes",
        "sizes and selectivities must have the same length");
  }
  for (int64_t t : synthetic_sizes) {
    if (t < 1) Bad("synthetic.sizes", "group sizes must be >= 1");
  }
  for (double s : synthetic_selectivities) {
    if (!(s >= 0.0 && s <= 1.0)) {
      Bad("synthetic.selectivities", "values must lie in [0, 1]");
    }
  }
}

}  // namespace udfsel
