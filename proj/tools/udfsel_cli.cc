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


// Command-line front end over the C API: plan, run, sweep and select-column.
// Exit codes: 0 success, 1 validation error, 2 runtime or infeasibility error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "udfsel.h"

namespace {

constexpr int kValidation = 1;
constexpr int kRuntime = 2;

struct CliError {
  int code;
  std::string message;
};

// Owns a string returned by the library.
struct Owned {
  char* text = nullptr;
  ~Owned() { udfsel_string_free(text); }
};

void Check(udfsel_status status) {
  if (status != UDFSEL_OK) throw CliError{status, udfsel_last_error()};
}

double ParseNumber(const std::string& text) {
  size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(x)) {
    throw CliError{kValidation, "grid: bad number '" + text + "'"};
  }
  return x;
}

std::string Strip(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

// Accepts "a,b,c", "a..b step s" and "a..b:s".
std::vector<double> ParseGrid(const std::string& raw) {
  const std::string text = Strip(raw);
  std::vector<double> grid;
  const size_t dots = text.find("..");
  if (dots == std::string::npos) {
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
      item = Strip(item);
      if (!item.empty()) grid.push_back(ParseNumber(item));
    }
  } else {
    const double lo = ParseNumber(Strip(text.substr(0, dots)));
    std::string rest = text.substr(dots + 2);
    std::string hi_text, step_text;
    const size_t word = rest.find("step");
    const size_t colon = rest.find(':');
    if (word != std::string::npos) {
      hi_text = rest.substr(0, word);
      step_text = rest.substr(word + 4);
    } else if (colon != std::string::npos) {
      hi_text = rest.substr(0, colon);
      step_text = rest.substr(colon + 1);
    } else {
      throw CliError{kValidation, "grid: a range needs a step"};
    }
    const double hi = ParseNumber(Strip(hi_text));
    const double step = ParseNumber(Strip(step_text));
    if (!(step > 0.0)) throw CliError{kValidation, "grid: step must be > 0"};
    if (hi < lo) throw CliError{kValidation, "grid: range end below start"};
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= count; ++i) {
      // Round away accumulated binary noise such as 0.30000000000000004.
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.12g", lo + static_cast<double>(i) * step);
      grid.push_back(std::stod(buf));
    }
  }
  if (grid.empty()) throw CliError{kValidation, "grid is empty"};
  return grid;
}

void Emit(const std::string& text, const std::string& out_path,
          const std::string& summary) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw CliError{kRuntime, "cannot write '" + out_path + "'"};
  std::cout << summary << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plans and simulates approximate selection queries with an "
               "expensive predicate."};
  app.fallthrough();
  app.require_subcommand(0, 1);
  std::string config_path, out_path, axis, grid_text;
  std::vector<std::string> overrides;
  long long seed = -1;
  bool print_config = false;
  app.add_option("--config", config_path, "Config file of key = value lines");
  app.add_option("--seed", seed, "Master seed")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out_path, "Write output here; stdout gets a summary");
  app.add_option("--set", overrides, "Override a config key (key=value)");
  app.add_flag("--print-config", print_config,
               "Print the effective config and exit");
  CLI::App* plan = app.add_subcommand("plan", "Solve once and print the strategy");
  CLI::App* run = app.add_subcommand("run", "Run trials and print the report");
  CLI::App* sweep = app.add_subcommand("sweep", "Run trials over a grid");
  sweep->add_option("--axis", axis, "num, c, alpha or beta")->required();
  sweep->add_option("--grid", grid_text,
                    "a,b,c or a..b step s or a..b:s")->required();
  CLI::App* select =
      app.add_subcommand("select-column", "Choose the correlated column");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kValidation;
  }

  udfsel_config* config = nullptr;
  try {
    Check(udfsel_config_create(&config));
    if (!config_path.empty()) {
      Check(udfsel_config_load_file(config, config_path.c_str()));
    }
    for (const auto& kv : overrides) {
      const size_t eq = kv.find('=');
      if (eq == std::string::npos) {
        throw CliError{kValidation, "--set expects key=value, got '" + kv + "'"};
      }
      Check(udfsel_config_set(config, kv.substr(0, eq).c_str(),
                              kv.substr(eq + 1).c_str()));
    }
    if (seed >= 0) {
      Check(udfsel_config_set(config, "seed", std::to_string(seed).c_str()));
    }
    if (print_config) {
      Owned text;
      Check(udfsel_config_render(config, &text.text));
      std::cout << text.text;
      udfsel_config_destroy(config);
      return 0;
    }
    if (app.get_subcommands().empty()) {
      throw CliError{kValidation, "a subcommand is required"};
    }
    Check(udfsel_config_validate(config));
    int code = 0;
    if (*plan) {
      Owned json;
      Check(udfsel_plan(config, &json.text));
      Emit(json.text, out_path, "wrote plan to " + out_path);
    } else if (*run) {
      Owned json, summary;
      Check(udfsel_run(config, &json.text, &summary.text));
      Emit(json.text, out_path, summary.text);
    } else if (*sweep) {
      const std::vector<double> grid = ParseGrid(grid_text);
      Owned csv;
      Check(udfsel_sweep(config, axis.c_str(), grid.data(), grid.size(),
                         &csv.text));
      const std::string failures = udfsel_last_error();
      Emit(csv.text, out_path,
           "wrote " + std::to_string(grid.size()) + " rows to " + out_path);
      if (!failures.empty()) {
        std::cerr << "error: " << failures << "\n";
        code = kRuntime;
      }
    } else if (*select) {
      Owned json;
      Check(udfsel_select_column(config, &json.text));
      Emit(json.text, out_path, "wrote column choice to " + out_path);
    }
    udfsel_config_destroy(config);
    return code;
  } catch (const CliError& e) {
    udfsel_config_destroy(config);
    std::cerr << "error: " << e.message << "\n";
    if (e.code == kValidation) std::cerr << "run with --help for usage\n";
    return e.code;
  }
}
