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


// Serialized forms of plans, run reports, sweeps and column choices.

#ifndef UDFSEL_REPORT_H_
#define UDFSEL_REPORT_H_

#include <span>
#include <string>

#include "udfsel/config.h"
#include "udfsel/harness.h"
#include "udfsel/pipeline.h"

namespace udfsel {

std::string PlanJson(const Config& config, const Plan& plan);
std::string ReportJson(const ExecutionReport& report);
// CSV with header axis,mean_cost,mean_evaluations,mean_retrievals,trials.
std::string SweepCsv(std::span<const SweepRow> rows);
std::string ColumnJson(const ColumnReport& report);

}  // namespace udfsel

#endif  // UDFSEL_REPORT_H_
