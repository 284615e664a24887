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

#ifndef CATCHMPC_SIM_HPP_
#define CATCHMPC_SIM_HPP_

#include <cstdint>
#include <string>

#include "catchmpc/kinematics.hpp"
#include "catchmpc/targeting.hpp"
#include "catchmpc/types.hpp"

namespace catchmpc {

enum class TrackingMode { ideal, first_order };

/// Tracking layer between commanded and executed accelerations. ideal
/// applies commands exactly; first_order low-pass-filters them with a
/// zero-order-hold discretization,
///
///   a_k = u_k + (a_{k-1} - u_k) * exp(-ts/tau)
///
/// so the step response after k cycles is 1 - exp(-k*ts/tau). tau <= 0
/// behaves as ideal. The filter state lives here.
struct Tracking {
  TrackingMode mode = TrackingMode::ideal;
  double tau = 0.05;  // s
  Vec14 accel = Vec14::Zero();
};

/// Advance the simulated plant one sampling period: the executed
/// acceleration is held constant over the step and integrated exactly.
SystemState plant_advance(const SystemState& state, const Vec14& u0, double ts,
                          Tracking& tracking);

/// True when the ball center is within r_catch of the catcher origin
/// (closed ball), descending (v_z < 0), and on or above the catcher opening
/// plane (the catcher +z axis).
bool catch_check(const Vec3& ball_p, const Vec3& ball_v, const Pose& catcher,
                 double r_catch);

/// Simulation parameters shared across episodes (planner config "sim" block).
struct SimParams {
  double r_catch = 0.06;        // m
  TrackingMode tracking = TrackingMode::ideal;
  double tau = 0.05;            // s, first-order tracking constant
  double episode_timeout = 5.0; // s, throw episodes
  double task_duration = 4.0;   // s, pose-task cap
  double task_min_duration = 1.5;  // s, keep running to capture overshoot
  double settle_pos_tol = 0.005;   // m
  double settle_vel_tol = 0.05;    // rad/s
  int settle_cycles = 5;
  double meas_sigma = 0.01;     // m, default measurement noise
  double meas_rate = 30.0;      // Hz
  double min_separation = 0.15; // m, Monte-Carlo start/target spacing
  int max_degraded_cycles = 10; // consecutive fallback cycles before abort
};

/// One planning task: either a thrown-ball interception episode or a
/// pose-to-pose task (the Monte-Carlo comparison unit).
struct Scenario {
  enum class Kind { throw_ball, pose_task };

  std::string name;
  Kind kind = Kind::throw_ball;
  SystemState initial_state;
  SafeZone safe_zone;
  double r_catch = 0.06;  // m
  std::uint64_t seed = 0;

  // throw_ball
  Vec3 ball_p0 = Vec3::Zero();
  Vec3 ball_v0 = Vec3::Zero();
  double meas_sigma = 0.01;  // m
  double meas_rate = 30.0;   // Hz

  // pose_task
  Pose start_pose;   // catcher pose at initial_state (informational)
  Pose target_pose;
  double duration = 4.0;  // s
};

struct EpisodeResult {
  enum class Outcome { caught, missed, no_target, aborted };

  Outcome outcome = Outcome::no_target;
  double effort = 0.0;        // E = sum ||u_exec||^2 over the episode
  double effort_left = 0.0;   // joints 1..7 partial sum
  double effort_right = 0.0;  // joints 8..14 partial sum
  double max_grasp_dev = 0.0; // m, |grasp distance - d_nom| on realized states
  Vec3 overshoot = Vec3::Zero();  // m, per world axis beyond the target
  double mean_cycle_s = 0.0;
  double worst_cycle_s = 0.0;
  int cycles = 0;
  int degraded_cycles = 0;
  double final_pos_error = 0.0;  // m, catcher vs target at episode end
  double max_chain_residual_converged = 0.0;  // over converged cycles' plans
  std::uint64_t scenario_hash = 0;
};

const char* to_string(EpisodeResult::Outcome outcome);
const char* to_string(TrackingMode mode);

}  // namespace catchmpc

#endif  // CATCHMPC_SIM_HPP_
