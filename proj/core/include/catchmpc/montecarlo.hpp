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

#ifndef CATCHMPC_MONTECARLO_HPP_
#define CATCHMPC_MONTECARLO_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "catchmpc/mpc.hpp"

namespace catchmpc {

struct MonteCarloParams {
  int n_trials = 100;
  std::vector<std::string> modes = {"pt", "at_balanced"};
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct TrialRow {
  int trial = 0;
  std::string mode;
  EpisodeResult result;
};

struct ModeSummary {
  std::string mode;
  int trials = 0;
  int caught = 0;
  double mean_effort = 0.0;
  double mean_effort_left = 0.0;
  double mean_effort_right = 0.0;
  double mean_overshoot = 0.0;  // mean over trials of the max-axis overshoot
  double mean_cycle_ms = 0.0;
  double worst_cycle_ms = 0.0;
  double max_grasp_dev = 0.0;
  double max_chain_residual_converged = 0.0;
};

struct ComparisonReport {
  int n_trials = 0;
  std::uint64_t seed = 0;
  std::vector<TrialRow> rows;  // trial-major, modes in requested order
  std::vector<ModeSummary> summaries() const;
};

/// Paired comparison: per trial, sample a start/target pose pair inside the
/// safe zone (separation >= sim.min_separation), drive the system to the
/// start pose once (shared setup), then run every requested mode on the
/// bitwise-identical pose task. Scenario hashes are asserted equal across
/// modes; individual episode failures are recorded, never abort the sweep.
ComparisonReport monte_carlo(const SystemModel& model,
                             const PlannerConfig& cfg, const Scenario& base,
                             const MonteCarloParams& params);

}  // namespace catchmpc

#endif  // CATCHMPC_MONTECARLO_HPP_
