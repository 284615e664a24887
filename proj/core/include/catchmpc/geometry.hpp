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

#ifndef CATCHMPC_GEOMETRY_HPP_
#define CATCHMPC_GEOMETRY_HPP_

#include "catchmpc/types.hpp"

namespace catchmpc {

/// Unit quaternion, stored w-first. Normalized after every constructor and
/// composition so that rollouts of chained transforms do not drift.
/// q and -q encode the same rotation; every error metric below is invariant
/// to that sign.
class UnitQuaternion {
 public:
  UnitQuaternion() : w_(1.0), x_(0.0), y_(0.0), z_(0.0) {}

  /// Normalizes the inputs. Throws std::invalid_argument if the norm is
  /// too small to normalize safely (< 1e-12) or any entry is non-finite.
  UnitQuaternion(double w, double x, double y, double z);

  static UnitQuaternion identity() { return UnitQuaternion(); }
  static UnitQuaternion from_axis_angle(const Vec3& axis, double angle);
  static UnitQuaternion from_rotation_matrix(const Mat3& r);

  double w() const { return w_; }
  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }

  /// Coefficients in serialization order [w, x, y, z].
  Vec4 wxyz() const { return Vec4(w_, x_, y_, z_); }

  UnitQuaternion conjugate() const { return UnitQuaternion(w_, -x_, -y_, -z_); }
  double dot(const UnitQuaternion& o) const {
    return w_ * o.w_ + x_ * o.x_ + y_ * o.y_ + z_ * o.z_;
  }

  Mat3 rotation_matrix() const;
  Vec3 rotate(const Vec3& v) const;

 private:
  double w_, x_, y_, z_;
};

/// Hamilton product on raw wxyz coefficient vectors, no normalization.
/// Quaternion-rate Jacobians need this: derivative quaternions are not unit.
Vec4 quat_product_raw(const Vec4& a, const Vec4& b);

/// Hamilton product, renormalized.
UnitQuaternion quat_compose(const UnitQuaternion& a, const UnitQuaternion& b);

/// Geodesic angle 2*acos(|<a,b>|) in [0, pi]. Sign-invariant and symmetric.
double quat_angle_error(const UnitQuaternion& a, const UnitQuaternion& b);

/// Componentwise difference a - s*b with s = sign(<a,b>), so the residual is
/// continuous across the double cover and zero iff a and b are the same
/// rotation. Feeds the quadratic orientation cost terms.
Vec4 quat_cost_residual(const UnitQuaternion& a, const UnitQuaternion& b);

/// Rigid transform: rotation followed by translation (meters).
struct RigidTransform {
  UnitQuaternion rotation;
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return RigidTransform{}; }

  Vec3 apply(const Vec3& p) const { return rotation.rotate(p) + translation; }
};

RigidTransform compose(const RigidTransform& a, const RigidTransform& b);
RigidTransform inverse(const RigidTransform& t);

/// Position + orientation of a frame in the world (catcher, end-effector,
/// interception target).
struct Pose {
  Vec3 p = Vec3::Zero();
  UnitQuaternion phi;

  RigidTransform to_transform() const { return RigidTransform{phi, p}; }
  static Pose from_transform(const RigidTransform& t) {
    return Pose{t.translation, t.rotation};
  }
};

}  // namespace catchmpc

#endif  // CATCHMPC_GEOMETRY_HPP_
