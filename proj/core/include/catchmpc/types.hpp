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

#ifndef CATCHMPC_TYPES_HPP_
#define CATCHMPC_TYPES_HPP_

#include <Eigen/Dense>

namespace catchmpc {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec7 = Eigen::Matrix<double, 7, 1>;
using Vec14 = Eigen::Matrix<double, 14, 1>;
using VecX = Eigen::VectorXd;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat77 = Eigen::Matrix<double, 7, 7>;
using MatX = Eigen::MatrixXd;

/// Joints per arm; the system stacks the left arm before the right arm.
inline constexpr int kArmDof = 7;
inline constexpr int kSystemDof = 2 * kArmDof;

}  // namespace catchmpc

#endif  // CATCHMPC_TYPES_HPP_
