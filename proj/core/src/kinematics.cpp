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

#include "catchmpc/kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace catchmpc {

namespace {

// Constant part of a modified-DH row: RotX(alpha)*TransX(a)*RotZ(theta0)*TransZ(d).
// The joint motion is a trailing RotZ(q) (RotZ and TransZ commute).
RigidTransform row_constant_transform(const DhRow& row) {
  const UnitQuaternion rot = quat_compose(
      UnitQuaternion::from_axis_angle(Vec3::UnitX(), row.alpha),
      UnitQuaternion::from_axis_angle(Vec3::UnitZ(), row.theta0));
  const double sa = std::sin(row.alpha);
  const double ca = std::cos(row.alpha);
  return RigidTransform{rot, Vec3(row.a, -row.d * sa, row.d * ca)};
}

UnitQuaternion rot_z(double q) {
  return UnitQuaternion(std::cos(0.5 * q), 0.0, 0.0, std::sin(0.5 * q));
}

struct ArmFrames {
  // Accumulated transform through joint i (after its RotZ), world frame.
  std::array<UnitQuaternion, kArmDof> rot_through;
  std::array<Vec3, kArmDof> joint_axis;    // world z-axis of joint i
  std::array<Vec3, kArmDof> joint_origin;  // world origin of joint i
  RigidTransform catcher;                  // ^W T_O through this arm
};

ArmFrames arm_frames(const ArmModel& model, const Vec7& q) {
  ArmFrames out;
  RigidTransform t = model.base_transform;
  for (int i = 0; i < kArmDof; ++i) {
    t = compose(t, row_constant_transform(model.rows[i]));
    out.joint_axis[i] = t.rotation.rotate(Vec3::UnitZ());
    out.joint_origin[i] = t.translation;
    t.rotation = quat_compose(t.rotation, rot_z(q(i)));
    out.rot_through[i] = t.rotation;
  }
  out.catcher = compose(t, model.grasp_transform);
  return out;
}

}  // namespace

void ArmModel::validate() const {
  for (int i = 0; i < kArmDof; ++i) {
    if (!(q_min(i) < q_max(i))) {
      throw std::invalid_argument("ArmModel: q_min must be < q_max (joint " +
                                  std::to_string(i + 1) + ")");
    }
    if (!(qd_max(i) > 0.0) || !(qdd_max(i) > 0.0)) {
      throw std::invalid_argument(
          "ArmModel: qd_max and qdd_max must be strictly positive (joint " +
          std::to_string(i + 1) + ")");
    }
  }
}

void SystemModel::validate() const {
  left.validate();
  right.validate();
  if (!(d_nom > 0.0)) {
    throw std::invalid_argument("SystemModel: d_nom must be positive");
  }
  // Grasp-point positions expressed in the catcher frame.
  const Vec3 pl = inverse(left.grasp_transform).translation;
  const Vec3 pr = inverse(right.grasp_transform).translation;
  const double d = (pl - pr).norm();
  if (std::abs(d - d_nom) > 1e-9) {
    throw std::invalid_argument(
        "SystemModel: d_nom inconsistent with grasp transforms (got " +
        std::to_string(d) + ", declared " + std::to_string(d_nom) + ")");
  }
}

Pose fk_end_effector(const ArmModel& model, const Vec7& q_arm) {
  RigidTransform t = model.base_transform;
  for (int i = 0; i < kArmDof; ++i) {
    t = compose(t, row_constant_transform(model.rows[i]));
    t.rotation = quat_compose(t.rotation, rot_z(q_arm(i)));
  }
  return Pose::from_transform(t);
}

Pose fk_catcher(const SystemModel& model, const Vec7& q_arm, ArmSide side) {
  const ArmModel& arm = model.arm(side);
  const Pose ee = fk_end_effector(arm, q_arm);
  return Pose::from_transform(
      compose(ee.to_transform(), arm.grasp_transform));
}

CatcherKinematics catcher_pose_and_jacobian(const SystemModel& model,
                                            const Vec7& q_arm, ArmSide side) {
  const ArmModel& arm = model.arm(side);
  const ArmFrames frames = arm_frames(arm, q_arm);

  CatcherKinematics out;
  out.pose = Pose::from_transform(frames.catcher);

  const Vec3 p_o = frames.catcher.translation;
  const Vec4 q_o = frames.catcher.rotation.wxyz();
  const Vec4 half_z(0.0, 0.0, 0.0, 0.5);

  for (int i = 0; i < kArmDof; ++i) {
    // Position rows: revolute-joint geometric Jacobian.
    const Vec3 dp = frames.joint_axis[i].cross(p_o - frames.joint_origin[i]);
    // Quaternion rows: Q = A_i * suffix with A_i the rotation through joint
    // i, so dQ/dq_i = A_i * (z/2) * suffix and suffix = conj(A_i) * Q.
    const Vec4 a = frames.rot_through[i].wxyz();
    const Vec4 a_conj(a(0), -a(1), -a(2), -a(3));
    const Vec4 suffix = quat_product_raw(a_conj, q_o);
    const Vec4 dq = quat_product_raw(quat_product_raw(a, half_z), suffix);
    out.jacobian.block<3, 1>(0, i) = dp;
    out.jacobian.block<4, 1>(3, i) = dq;
  }
  return out;
}

Mat77 catcher_jacobian(const SystemModel& model, const Vec7& q_arm,
                       ArmSide side) {
  return catcher_pose_and_jacobian(model, q_arm, side).jacobian;
}

Vec7 chain_residual(const SystemModel& model, const Vec7& q_l,
                    const Vec7& q_r) {
  const Pose left = fk_catcher(model, q_l, ArmSide::left);
  const Pose right = fk_catcher(model, q_r, ArmSide::right);
  Vec7 r;
  r.head<3>() = left.p - right.p;
  r.tail<4>() = quat_cost_residual(left.phi, right.phi);
  return r;
}

ChainResidualEval chain_residual_with_jacobian(const SystemModel& model,
                                               const Vec7& q_l,
                                               const Vec7& q_r) {
  const CatcherKinematics kl =
      catcher_pose_and_jacobian(model, q_l, ArmSide::left);
  const CatcherKinematics kr =
      catcher_pose_and_jacobian(model, q_r, ArmSide::right);

  const double s = kl.pose.phi.dot(kr.pose.phi) >= 0.0 ? 1.0 : -1.0;

  ChainResidualEval out;
  out.residual.head<3>() = kl.pose.p - kr.pose.p;
  out.residual.tail<4>() = kl.pose.phi.wxyz() - s * kr.pose.phi.wxyz();
  // The hemisphere sign s is locally constant, so it passes through the
  // derivative untouched.
  out.d_left = kl.jacobian;
  out.d_right.topRows<3>() = -kr.jacobian.topRows<3>();
  out.d_right.bottomRows<4>() = -s * kr.jacobian.bottomRows<4>();
  return out;
}

double grasp_point_distance(const SystemModel& model, const Vec7& q_l,
                            const Vec7& q_r) {
  const Pose el = fk_end_effector(model.left, q_l);
  const Pose er = fk_end_effector(model.right, q_r);
  return (el.p - er.p).norm();
}

double grasp_deviation_bound_factor(const SystemModel& model) {
  // p_El - p_Er = dp + (R_l a_l - R_r a_r) with a_i the grasp-point offsets
  // in the catcher frame. A rotation mismatch of angle theta moves the lever
  // arms by at most theta * max|a|, and theta <= 2.21 * |dq| for the
  // sign-aligned quaternion residual up to |dq| ~ 0.7.
  const double al = inverse(model.left.grasp_transform).translation.norm();
  const double ar = inverse(model.right.grasp_transform).translation.norm();
  const double lever = std::max(al, ar);
  return std::sqrt(2.0) * std::max(1.0, 2.21 * lever);
}

}  // namespace catchmpc
