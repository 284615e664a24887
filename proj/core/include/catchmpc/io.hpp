// Copyright 2026 The catchmpc Authors
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

#ifndef CATCHMPC_IO_HPP_
#define CATCHMPC_IO_HPP_

#include <string>
#include <vector>

#include "catchmpc/montecarlo.hpp"
#include "catchmpc/mpc.hpp"

namespace catchmpc {

// All file outputs are UTF-8 and deterministic for fixed (config, seed),
// except fields/columns whose names end in "_ms": those carry wall-clock
// measurements and are report-only.

/// One CycleRecord per line (JSON-lines). Schema documented in the README.
void write_episode_jsonl(const std::vector<CycleRecord>& records,
                         const std::string& path);

/// Single-row CSV summary of an episode.
void write_episode_summary_csv(const EpisodeResult& result,
                               const std::string& path);

/// Comparison CSV: one row per trial per mode with columns
/// trial,mode,outcome,E,overshoot_x,overshoot_y,overshoot_z,max_grasp_dev,
/// mean_cycle_ms,worst_cycle_ms.
void write_report_csv(const ComparisonReport& report, const std::string& path);

/// JSON aggregate of the comparison (per-mode summaries plus per-trial data).
void write_report_summary_json(const ComparisonReport& report,
                               const std::string& path);

/// Full plan artifact for the plan command.
void write_plan_json(const Plan& plan, PlannerMode mode, int horizon,
                     double ts, const std::string& path);

/// Measurement replay log: CSV with columns t,px,py,pz (seconds, meters).
/// The simulator emits this format; the estimator can replay it.
void write_measurement_csv(const std::vector<MeasurementSample>& samples,
                           const std::string& path);
std::vector<MeasurementSample> read_measurement_csv(const std::string& path);

}  // namespace catchmpc

#endif  // CATCHMPC_IO_HPP_
