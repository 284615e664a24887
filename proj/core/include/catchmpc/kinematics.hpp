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

#ifndef CATCHMPC_KINEMATICS_HPP_
#define CATCHMPC_KINEMATICS_HPP_

#include <array>
#include <string>

#include "catchmpc/geometry.hpp"
#include "catchmpc/types.hpp"

namespace catchmpc {

/// One kinematic row in the modified DH convention:
///
///   T_i(q_i) = RotX(alpha) * TransX(a) * RotZ(theta0 + q_i) * TransZ(d)
///
/// alpha: link twist [rad], a: link length [m], d: joint offset [m],
/// theta0: joint angle offset [rad]. The model-file schema pins this
/// convention bit-exactly (see docs in model_json.cpp).
struct DhRow {
  double alpha = 0.0;
  double a = 0.0;
  double d = 0.0;
  double theta0 = 0.0;
};

/// Kinematic description of one 7-DoF arm plus its rigid grasp on the
/// catcher and its joint-space limits.
struct ArmModel {
  std::array<DhRow, kArmDof> rows;
  RigidTransform base_transform;   // ^W T_B
  RigidTransform grasp_transform;  // ^E T_O
  Vec7 q_min, q_max;               // rad
  Vec7 qd_max;                     // rad/s, symmetric bounds
  Vec7 qdd_max;                    // rad/s^2, symmetric bounds

  /// Throws std::invalid_argument on ordering/positivity violations.
  void validate() const;
};

enum class ArmSide { left, right };

/// Both arms plus the nominal grasp distance implied by the rigid grasp.
struct SystemModel {
  std::string name;
  ArmModel left;
  ArmModel right;
  double d_nom = 0.0;  // m, distance between the two grasp points

  const ArmModel& arm(ArmSide side) const {
    return side == ArmSide::left ? left : right;
  }

  /// Validates both arms and checks d_nom against the grasp transforms:
  /// the distance between the two end-effector origins expressed in the
  /// catcher frame must equal d_nom within 1e-9.
  void validate() const;
};

/// Stacked joint positions and velocities, left arm first. n = 14.
struct SystemState {
  Vec14 q = Vec14::Zero();
  Vec14 qdot = Vec14::Zero();

  Eigen::Ref<const Vec7> q_left() const { return q.head<kArmDof>(); }
  Eigen::Ref<const Vec7> q_right() const { return q.tail<kArmDof>(); }
};

/// End-effector pose via chained transforms base * row_1 * ... * row_7.
/// Joint bounds are not enforced; callers may probe out-of-bounds configs.
Pose fk_end_effector(const ArmModel& model, const Vec7& q_arm);

/// Catcher pose computed through the chosen arm: fk_end_effector composed
/// with the arm's grasp transform.
Pose fk_catcher(const SystemModel& model, const Vec7& q_arm, ArmSide side);

/// 7x7 Jacobian of the catcher pose w.r.t. that arm's joints.
/// Rows 0..2: position [m]; rows 3..6: quaternion rates, w-first.
Mat77 catcher_jacobian(const SystemModel& model, const Vec7& q_arm,
                       ArmSide side);

/// Pose and Jacobian in one pass; the solver hot path calls this.
struct CatcherKinematics {
  Pose pose;
  Mat77 jacobian;
};
CatcherKinematics catcher_pose_and_jacobian(const SystemModel& model,
                                            const Vec7& q_arm, ArmSide side);

/// Closed-chain residual: zero iff both arms place the catcher at the
/// identical pose. Entries 0..2 position difference [m], 3..6 sign-aligned
/// quaternion difference.
Vec7 chain_residual(const SystemModel& model, const Vec7& q_l, const Vec7& q_r);

/// Residual plus its Jacobian blocks w.r.t. each arm's joints.
struct ChainResidualEval {
  Vec7 residual;
  Mat77 d_left;   // d residual / d q_l
  Mat77 d_right;  // d residual / d q_r
};
ChainResidualEval chain_residual_with_jacobian(const SystemModel& model,
                                               const Vec7& q_l,
                                               const Vec7& q_r);

/// Euclidean distance between the two end-effector grasp points.
/// Equals d_nom whenever the chain residual is zero.
double grasp_point_distance(const SystemModel& model, const Vec7& q_l,
                            const Vec7& q_r);

/// Factor kappa such that |grasp_point_distance - d_nom| <= kappa * ||r||_2
/// for small chain residuals r. Determined by the grasp transform lever arms.
double grasp_deviation_bound_factor(const SystemModel& model);

/// Model-file (JSON) I/O. Throws std::runtime_error with the offending
/// field named on parse/validation failures.
SystemModel load_system_model(const std::string& path);
void save_system_model(const SystemModel& model, const std::string& path);

}  // namespace catchmpc

#endif  // CATCHMPC_KINEMATICS_HPP_
