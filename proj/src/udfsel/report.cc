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


#include "udfsel/report.h"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace udfsel {

namespace {

using Json = nlohmann::ordered_json;

Json StrategyJson(const std::vector<std::string>& ids,
                  const Strategy& strategy) {
  Json out = Json::object();
  for (size_t g = 0; g < strategy.size() && g < ids.size(); ++g) {
    out[ids[g]] = {{"R", strategy[g].retrieve}, {"E", strategy[g].evaluate}};
  }
  return out;
}

Json GroupsJson(const std::vector<GroupStats>& groups) {
  Json out = Json::array();
  for (const auto& g : groups) {
    out.push_back({{"id", g.id},
                   {"size", g.size},
                   {"sampled", g.sampled},
                   {"sampled_positive", g.sampled_positive},
                   {"selectivity", g.selectivity},
                   {"variance", g.variance}});
  }
  return out;
}

template <typename T>
Json Optional(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

std::string Cell(double x) {
  if (!std::isfinite(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

}  // namespace

std::string PlanJson(const Config& config, const Plan& plan) {
  Json out;
  out["solver"] = config.solver;
  out["column"] = plan.grouping.column;
  out["strategy"] = StrategyJson(plan.grouping.ids, plan.strategy);
  out["expected_cost"] = plan.expected_cost;
  out["groups"] = GroupsJson(plan.groups);
  out["fallback"] = plan.fallback;
  if (plan.fallback) out["fallback_reason"] = plan.fallback_reason;
  if (plan.chosen_num) out["chosen_num"] = *plan.chosen_num;
  return out.dump(2) + "\n";
}

std::string ReportJson(const ExecutionReport& report) {
  Json out;
  out["solver"] = report.solver;
  out["column"] = report.column;
  out["strategy"] = StrategyJson(report.group_ids, report.strategy);
  out["expected_cost"] = report.expected_cost;
  if (report.chosen_num) out["chosen_num"] = *report.chosen_num;
  Json trials = Json::array();
  for (const auto& t : report.trials) {
    trials.push_back({{"precision", t.precision},
                      {"recall", t.recall},
                      {"cost", t.cost},
                      {"evaluations", t.Evaluations()},
                      {"retrievals", t.Retrievals()},
                      {"seed", t.seed},
                      {"fallback", t.fallback}});
  }
  out["trials"] = std::move(trials);
  // Absent rates are written as null.
  out["precision_satisfaction"] = Optional(report.precision_satisfaction);
  out["recall_satisfaction"] = Optional(report.recall_satisfaction);
  out["mean_cost"] = Optional(report.mean_cost);
  out["mean_evaluations"] = Optional(report.mean_evaluations);
  out["mean_retrievals"] = Optional(report.mean_retrievals);
  out["baseline"] = {{"name", report.baseline.name},
                     {"mean_cost", report.baseline.mean_cost},
                     {"mean_evaluations", report.baseline.mean_evaluations},
                     {"mean_retrievals", report.baseline.mean_retrievals}};
  out["flags"] = report.flags;
  return out.dump(2) + "\n";
}

std::string SweepCsv(std::span<const SweepRow> rows) {
  std::ostringstream out;
  out << "axis,mean_cost,mean_evaluations,mean_retrievals,trials\n";
  for (const auto& r : rows) {
    out << Cell(r.axis) << "," << Cell(r.mean_cost) << ","
        << Cell(r.mean_evaluations) << "," << Cell(r.mean_retrievals) << ","
        << r.trials << "\n";
  }
  return out.str();
}

std::string ColumnJson(const ColumnReport& report) {
  Json out;
  out["policy"] = report.policy;
  out["column"] = report.column;
  out["sample_size"] = report.sample_size;
  out["doublings"] = report.diagnostics.doublings;
  Json candidates = Json::array();
  for (const auto& c : report.diagnostics.candidates) {
    candidates.push_back({{"name", c.name},
                          {"distinct", c.distinct},
                          {"estimated_cost", c.estimated_cost}});
  }
  out["candidates"] = std::move(candidates);
  if (!report.diagnostics.bucket_edges.empty()) {
    out["bucket_edges"] = report.diagnostics.bucket_edges;
  }
  out["groups"] = GroupsJson(report.groups);
  return out.dump(2) + "\n";
}

}  // namespace udfsel
