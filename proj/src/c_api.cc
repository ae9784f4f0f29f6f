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


#include "udfsel.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>
#include <vector>

#include "udfsel/config.h"
#include "udfsel/core.h"
#include "udfsel/harness.h"
#include "udfsel/pipeline.h"
#include "udfsel/random.h"
#include "udfsel/report.h"

struct udfsel_config {
  udfsel::Config config;
};

namespace {

thread_local std::string last_error;

char* Copy(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Runs fn and maps exceptions to status codes.
template <typename Fn>
udfsel_status Guard(Fn&& fn) {
  last_error.clear();
  try {
    fn();
    return UDFSEL_OK;
  } catch (const std::invalid_argument& e) {
    last_error = e.what();
    return UDFSEL_VALIDATION_ERROR;
  } catch (const std::exception& e) {
    last_error = e.what();
    return UDFSEL_RUNTIME_ERROR;
  } catch (...) {
    last_error = "unknown error";
    return UDFSEL_RUNTIME_ERROR;
  }
}

void Require(const void* p, const char* what) {
  if (p == nullptr) {
    throw udfsel::ValidationError(std::string(what) + " must not be null");
  }
}

std::string Summary(const udfsel::ExecutionReport& r) {
  char buf[512];
  if (r.trials.empty()) {
    std::snprintf(buf, sizeof(buf),
                  "trials=0 expected_cost=%.6g baseline_cost=%.6g", 
                  r.expected_cost, r.baseline.mean_cost);
  } else {
    std::snprintf(buf, sizeof(buf),
                  "trials=%zu mean_cost=%.6g baseline_cost=%.6g "
                  "precision_satisfaction=%.4f recall_satisfaction=%.4f "
                  "fallbacks=%zu",
                  r.trials.size(), *r.mean_cost, r.baseline.mean_cost,
                  *r.precision_satisfaction, *r.recall_satisfaction,
                  r.flags.size());
  }
  return buf;
}

}  // namespace

extern "C" {

udfsel_status udfsel_config_create(udfsel_config** out) {
  return Guard([&] {
    Require(out, "out");
    *out = new udfsel_config();
  });
}

void udfsel_config_destroy(udfsel_config* config) { delete config; }

udfsel_status udfsel_config_load_file(udfsel_config* config,
                                      const char* path) {
  return Guard([&] {
    Require(config, "config");
    Require(path, "path");
    config->config.LoadFile(path);
  });
}

udfsel_status udfsel_config_parse(udfsel_config* config, const char* text) {
  return Guard([&] {
    Require(config, "config");
    Require(text, "text");
    config->config.Parse(text);
  });
}

udfsel_status udfsel_config_set(udfsel_config* config, const char* key,
                                const char* value) {
  return Guard([&] {
    Require(config, "config");
    Require(key, "key");
    Require(value, "value");
    config->config.Set(key, value);
  });
}

udfsel_status udfsel_config_validate(const udfsel_config* config) {
  return Guard([&] {
    Require(config, "config");
    config->config.Validate();
  });
}

udfsel_status udfsel_config_render(const udfsel_config* config,
                                   char** text_out) {
  return Guard([&] {
    Require(config, "config");
    Require(text_out, "text_out");
    *text_out = Copy(config->config.Render());
  });
}

udfsel_status udfsel_plan(const udfsel_config* config, char** json_out) {
  return Guard([&] {
    Require(config, "config");
    Require(json_out, "json_out");
    const udfsel::Config& c = config->config;
    const udfsel::Dataset dataset = udfsel::LoadDataset(c);
    const udfsel::Plan plan =
        udfsel::MakePlan(c, dataset, dataset.labels, c.seed);
    *json_out = Copy(udfsel::PlanJson(c, plan));
  });
}

udfsel_status udfsel_run(const udfsel_config* config, char** json_out,
                         char** summary_out) {
  return Guard([&] {
    Require(config, "config");
    Require(json_out, "json_out");
    const udfsel::ExecutionReport report = udfsel::RunTrials(config->config);
    *json_out = Copy(udfsel::ReportJson(report));
    if (summary_out != nullptr) *summary_out = Copy(Summary(report));
  });
}

udfsel_status udfsel_sweep(const udfsel_config* config, const char* axis,
                           const double* grid, size_t grid_size,
                           char** csv_out) {
  return Guard([&] {
    Require(config, "config");
    Require(axis, "axis");
    Require(csv_out, "csv_out");
    if (grid_size > 0) Require(grid, "grid");
    const std::vector<udfsel::SweepRow> rows = udfsel::Sweep(
        config->config, axis, std::vector<double>(grid, grid + grid_size));
    for (const auto& row : rows) {
      if (!row.error.empty()) {
        last_error += (last_error.empty() ? "" : "; ") + std::string("point ") +
                      std::to_string(row.axis) + ": " + row.error;
      }
    }
    const std::string errors = last_error;
    *csv_out = Copy(udfsel::SweepCsv(rows));
    last_error = errors;
  });
}

udfsel_status udfsel_select_column(const udfsel_config* config,
                                   char** json_out) {
  return Guard([&] {
    Require(config, "config");
    Require(json_out, "json_out");
    *json_out = Copy(udfsel::ColumnJson(udfsel::SelectColumn(config->config)));
  });
}

const char* udfsel_last_error(void) { return last_error.c_str(); }

void udfsel_string_free(char* text) { std::free(text); }

}  // extern "C"
