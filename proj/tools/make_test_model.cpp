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

// Generates models/dual_arm_default.json. All numeric parameters are
// synthetic test-fixture values for a generic 7-DoF S-R-S arm pair; they are
// not calibrated against any hardware. The grasp transforms are derived from
// the printed home configuration so that the closed chain is satisfied there
// exactly, and d_nom follows from the grasp transforms.
//
// Usage: make_test_model <output.json>

#include <cmath>
#include <cstdio>
#include <numbers>

#include <Eigen/Dense>

#include "catchmpc/kinematics.hpp"

namespace {

using namespace catchmpc;

constexpr double kPi = std::numbers::pi;

ArmModel generic_arm(const Vec3& base_position) {
  ArmModel arm;
  arm.rows = {DhRow{0.0, 0.0, 0.35, 0.0},
              DhRow{-kPi / 2, 0.0, 0.0, 0.0},
              DhRow{kPi / 2, 0.0, 0.42, 0.0},
              DhRow{kPi / 2, 0.06, 0.0, 0.0},
              DhRow{-kPi / 2, -0.06, 0.40, 0.0},
              DhRow{-kPi / 2, 0.0, 0.0, 0.0},
              DhRow{kPi / 2, 0.0, 0.12, 0.0}};
  arm.base_transform = RigidTransform{UnitQuaternion::identity(), base_position};
  arm.grasp_transform = RigidTransform::identity();
  arm.q_min << -2.8, -2.3, -2.8, -2.4, -2.8, -2.4, -2.8;
  arm.q_max << 2.8, 2.3, 2.8, 2.4, 2.8, 2.4, 2.8;
  arm.qd_max << 2.5, 2.5, 2.5, 2.5, 3.0, 3.0, 3.0;
  arm.qdd_max << 10.0, 10.0, 10.0, 10.0, 12.0, 12.0, 12.0;
  return arm;
}

// Damped-least-squares position IK for fixture construction only (the
// library itself never needs IK; the planner resolves redundancy).
Vec7 solve_position(const SystemModel& model, ArmSide side, const Vec7& q0,
                    const Vec3& target) {
  Vec7 q = q0;
  for (int iter = 0; iter < 400; ++iter) {
    const CatcherKinematics kin = catcher_pose_and_jacobian(model, q, side);
    const Vec3 err = target - kin.pose.p;
    if (err.norm() < 1e-12) break;
    const Eigen::Matrix<double, 3, 7> j = kin.jacobian.topRows<3>();
    const Mat3 jjt = j * j.transpose() + 1e-6 * Mat3::Identity();
    const Vec7 dq = j.transpose() * jjt.ldlt().solve(err);
    // Mild pull toward the seed keeps the posture elbow-bent.
    q += dq + 0.02 * (q0 - q);
  }
  return q;
}

void print_vec(const char* label, const Eigen::Ref<const VecX>& v) {
  std::printf("%s = [", label);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::printf("%s%.17g", i ? ", " : "", v(i));
  }
  std::printf("]\n");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: make_test_model <output.json>\n");
    return 2;
  }

  SystemModel model;
  model.name = "dual_arm_test_fixture";
  model.left = generic_arm(Vec3(0.0, 0.45, 0.0));
  model.right = generic_arm(Vec3(0.0, -0.45, 0.0));
  model.d_nom = 1.0;  // placeholder until grasp transforms are derived

  // Home posture: end-effectors face each other across the catcher.
  const Vec7 seed_l = (Vec7() << -0.4, 0.7, 0.3, 1.3, 0.2, 0.9, 0.0).finished();
  const Vec7 seed_r = (Vec7() << 0.4, 0.7, -0.3, 1.3, -0.2, 0.9, 0.0).finished();
  const Vec3 ee_target_l(0.55, 0.18, 0.55);
  const Vec3 ee_target_r(0.55, -0.18, 0.55);

  const Vec7 q_home_l = solve_position(model, ArmSide::left, seed_l, ee_target_l);
  const Vec7 q_home_r = solve_position(model, ArmSide::right, seed_r, ee_target_r);

  const Pose ee_l = fk_end_effector(model.left, q_home_l);
  const Pose ee_r = fk_end_effector(model.right, q_home_r);
  std::printf("left EE position  = [%.6f, %.6f, %.6f]\n", ee_l.p.x(), ee_l.p.y(), ee_l.p.z());
  std::printf("right EE position = [%.6f, %.6f, %.6f]\n", ee_r.p.x(), ee_r.p.y(), ee_r.p.z());

  // Catcher home frame: midpoint, opening up, identity yaw.
  const Pose catcher_home{0.5 * (ee_l.p + ee_r.p), UnitQuaternion::identity()};
  const RigidTransform w_t_o = catcher_home.to_transform();
  model.left.grasp_transform = compose(inverse(ee_l.to_transform()), w_t_o);
  model.right.grasp_transform = compose(inverse(ee_r.to_transform()), w_t_o);

  const Vec3 pl = inverse(model.left.grasp_transform).translation;
  const Vec3 pr = inverse(model.right.grasp_transform).translation;
  model.d_nom = (pl - pr).norm();

  model.validate();

  // Chain must close exactly at home.
  const Vec7 residual = chain_residual(model, q_home_l, q_home_r);
  std::printf("home chain residual inf-norm = %.3e\n",
              residual.cwiseAbs().maxCoeff());
  std::printf("d_nom = %.17g\n", model.d_nom);
  std::printf("catcher home = [%.17g, %.17g, %.17g]\n", catcher_home.p.x(),
              catcher_home.p.y(), catcher_home.p.z());
  print_vec("q_home_left ", q_home_l);
  print_vec("q_home_right", q_home_r);

  // Conditioning at home (smallest position-Jacobian singular value).
  for (ArmSide side : {ArmSide::left, ArmSide::right}) {
    const Vec7& q = side == ArmSide::left ? q_home_l : q_home_r;
    const auto kin = catcher_pose_and_jacobian(model, q, side);
    Eigen::JacobiSVD<Eigen::Matrix<double, 3, 7>> svd(kin.jacobian.topRows<3>());
    std::printf("%s arm min position singular value = %.4f\n",
                side == ArmSide::left ? "left" : "right",
                svd.singularValues().minCoeff());
  }

  save_system_model(model, argv[1]);
  std::printf("wrote %s\n", argv[1]);
  return 0;
}
