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

#ifndef CATCHMPC_MPC_HPP_
#define CATCHMPC_MPC_HPP_

#include <optional>
#include <string>
#include <vector>

#include "catchmpc/config.hpp"
#include "catchmpc/ocp.hpp"
#include "catchmpc/sim.hpp"

namespace catchmpc {

/// Per-cycle planner settings (mode/weights resolved from a profile).
struct MpcSettings {
  PlannerMode mode = PlannerMode::at;
  PlannerWeights weights;
  int horizon = 20;
  double ts = 0.04;
  OcpSolveOptions solve;
  double chain_soft_tol = 1e-3;
};

/// Settings from a config, optionally overriding the profile (Monte-Carlo
/// runs several profiles on one config).
MpcSettings make_mpc_settings(const PlannerConfig& cfg,
                              const std::string& profile_override = "");

/// One receding-horizon cycle.
struct CycleRecord {
  double t = 0.0;           // s, simulated time at cycle start
  TargetPose target;
  Plan plan;
  double compute_time = 0.0;  // s, wall clock (report-only)
  PlannerMode mode = PlannerMode::at;
  bool degraded = false;    // solver failed; previous plan shifted and reused
  Vec14 u_exec = Vec14::Zero();  // applied first input
  SystemState state;        // realized state at cycle start
  double grasp_dev = 0.0;   // m, |grasp distance - d_nom| at cycle start
  Vec3 ball_p = Vec3::Zero();
  Vec3 ball_v = Vec3::Zero();
  bool has_ball = false;
};

/// Assemble the cycle problem (AT terminal weights from this cycle's e(0)),
/// warm-start from prev, solve and record timing. On solver failure the
/// previous plan is shifted one step and reused (degraded flag); with no
/// previous plan the cycle holds (zero accelerations).
CycleRecord mpc_step(const SystemModel& model, const SystemState& state,
                     const TargetPose& target, const MpcSettings& settings,
                     const CycleRecord* prev);

/// E = sum of squared executed first-input accelerations over the episode,
/// plus the per-arm partial sums.
struct ControlEffort {
  double total = 0.0;
  double left = 0.0;
  double right = 0.0;
};
ControlEffort control_effort(const std::vector<CycleRecord>& records);

struct EpisodeOutput {
  std::vector<CycleRecord> records;
  EpisodeResult result;
  SystemState final_state;
  std::vector<MeasurementSample> measurements;  // throw episodes only
};

/// Closed-loop episode at the sampling period ts: ingest ball measurements,
/// KF update, re-predict, re-select the target (frozen within t_lock of
/// t_catch), plan, and advance the simulated plant by the first input.
/// Terminates at catch, floor impact, settle, or timeout. Pose-task
/// scenarios skip the ball pipeline and drive to the fixed target pose.
EpisodeOutput run_episode(const SystemModel& model, const Scenario& scenario,
                          const PlannerConfig& cfg,
                          const std::string& profile_override = "");

}  // namespace catchmpc

#endif  // CATCHMPC_MPC_HPP_
