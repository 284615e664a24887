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

#ifndef CATCHMPC_TARGETING_HPP_
#define CATCHMPC_TARGETING_HPP_

#include <optional>
#include <vector>

#include "catchmpc/ballistics.hpp"
#include "catchmpc/geometry.hpp"
#include "catchmpc/types.hpp"

namespace catchmpc {

/// Axis-aligned workspace box (world frame) inside which interception
/// candidates are admissible.
struct SafeZone {
  Vec3 min_corner = Vec3::Zero();
  Vec3 max_corner = Vec3::Zero();

  /// Closed-box containment.
  bool contains(const Vec3& p) const {
    return (p.array() >= min_corner.array()).all() &&
           (p.array() <= max_corner.array()).all();
  }

  void validate() const;
};

/// Selected interception pose with the catch time and predicted ball
/// velocity at impact.
struct TargetPose {
  Pose pose;
  double t_catch = 0.0;        // s
  Vec3 impact_velocity = Vec3::Zero();  // m/s
};

struct TargetingConfig {
  double v_min_impact = 0.1;   // m/s, below this the prediction is degenerate
  double t_lock = 0.12;        // s, target frozen this close to t_catch
  bool opening_axis_world_up = true;
  double dt_pred = 0.02;       // s, prediction sample spacing
  double pred_horizon = 3.0;   // s
};

/// Subsequence of samples whose positions lie inside the closed box.
/// An empty result is valid: no feasible catch yet, the planner holds.
std::vector<TrajectorySample> filter_safe(const PredictedTrajectory& traj,
                                          const SafeZone& zone);

/// Orientation for the catch: the catcher opening axis (its +z) maps to
/// world +z, and the designated lateral axis (+x) aligns with the horizontal
/// projection of -d_impact. Near-vertical impacts (projection < 1e-6) fall
/// back to lateral = world +x. With opening_axis_world_up = false the
/// opening axis faces the incoming ball (-d_impact) instead.
/// Returns nullopt when |v_catch| <= v_min_impact; the caller keeps its
/// previous orientation target.
std::optional<UnitQuaternion> impact_orientation(const Vec3& v_catch,
                                                 bool opening_axis_world_up,
                                                 double v_min_impact);

/// Picks the candidate minimizing required average velocity
/// |p_cand - p_catcher| / (t_cand - t_now); ties break to the earlier
/// t_cand. Candidates at or before t_now are ignored. The target orientation
/// comes from impact_orientation; when that is degenerate, prev_orientation
/// (or identity) is kept.
std::optional<TargetPose> select_target(
    const std::vector<TrajectorySample>& candidates, const Pose& catcher_now,
    double t_now, const TargetingConfig& cfg,
    const std::optional<UnitQuaternion>& prev_orientation = std::nullopt);

}  // namespace catchmpc

#endif  // CATCHMPC_TARGETING_HPP_
