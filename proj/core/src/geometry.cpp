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

#include "catchmpc/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace catchmpc {

UnitQuaternion::UnitQuaternion(double w, double x, double y, double z) {
  const double n2 = w * w + x * x + y * y + z * z;
  if (!std::isfinite(n2) || n2 < 1e-24) {
    throw std::invalid_argument("UnitQuaternion: norm too small or non-finite");
  }
  const double inv = 1.0 / std::sqrt(n2);
  w_ = w * inv;
  x_ = x * inv;
  y_ = y * inv;
  z_ = z * inv;
}

UnitQuaternion UnitQuaternion::from_axis_angle(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (n < 1e-12) {
    throw std::invalid_argument("from_axis_angle: zero axis");
  }
  const double half = 0.5 * angle;
  const double s = std::sin(half) / n;
  return UnitQuaternion(std::cos(half), axis.x() * s, axis.y() * s, axis.z() * s);
}

UnitQuaternion UnitQuaternion::from_rotation_matrix(const Mat3& r) {
  // Shepperd's method: pick the largest diagonal combination for stability.
  const double tr = r(0, 0) + r(1, 1) + r(2, 2);
  double w, x, y, z;
  if (tr > 0.0) {
    double s = std::sqrt(tr + 1.0) * 2.0;
    w = 0.25 * s;
    x = (r(2, 1) - r(1, 2)) / s;
    y = (r(0, 2) - r(2, 0)) / s;
    z = (r(1, 0) - r(0, 1)) / s;
  } else if (r(0, 0) > r(1, 1) && r(0, 0) > r(2, 2)) {
    double s = std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2)) * 2.0;
    w = (r(2, 1) - r(1, 2)) / s;
    x = 0.25 * s;
    y = (r(0, 1) + r(1, 0)) / s;
    z = (r(0, 2) + r(2, 0)) / s;
  } else if (r(1, 1) > r(2, 2)) {
    double s = std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2)) * 2.0;
    w = (r(0, 2) - r(2, 0)) / s;
    x = (r(0, 1) + r(1, 0)) / s;
    y = 0.25 * s;
    z = (r(1, 2) + r(2, 1)) / s;
  } else {
    double s = std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1)) * 2.0;
    w = (r(1, 0) - r(0, 1)) / s;
    x = (r(0, 2) + r(2, 0)) / s;
    y = (r(1, 2) + r(2, 1)) / s;
    z = 0.25 * s;
  }
  return UnitQuaternion(w, x, y, z);
}

Mat3 UnitQuaternion::rotation_matrix() const {
  Mat3 r;
  const double ww = w_ * w_, xx = x_ * x_, yy = y_ * y_, zz = z_ * z_;
  r(0, 0) = ww + xx - yy - zz;
  r(1, 1) = ww - xx + yy - zz;
  r(2, 2) = ww - xx - yy + zz;
  r(0, 1) = 2.0 * (x_ * y_ - w_ * z_);
  r(1, 0) = 2.0 * (x_ * y_ + w_ * z_);
  r(0, 2) = 2.0 * (x_ * z_ + w_ * y_);
  r(2, 0) = 2.0 * (x_ * z_ - w_ * y_);
  r(1, 2) = 2.0 * (y_ * z_ - w_ * x_);
  r(2, 1) = 2.0 * (y_ * z_ + w_ * x_);
  return r;
}

Vec3 UnitQuaternion::rotate(const Vec3& v) const {
  // v' = v + 2w(u x v) + 2(u x (u x v)) with u = (x, y, z).
  const Vec3 u(x_, y_, z_);
  const Vec3 t = 2.0 * u.cross(v);
  return v + w_ * t + u.cross(t);
}

Vec4 quat_product_raw(const Vec4& a, const Vec4& b) {
  return Vec4(a(0) * b(0) - a(1) * b(1) - a(2) * b(2) - a(3) * b(3),
              a(0) * b(1) + a(1) * b(0) + a(2) * b(3) - a(3) * b(2),
              a(0) * b(2) - a(1) * b(3) + a(2) * b(0) + a(3) * b(1),
              a(0) * b(3) + a(1) * b(2) - a(2) * b(1) + a(3) * b(0));
}

UnitQuaternion quat_compose(const UnitQuaternion& a, const UnitQuaternion& b) {
  const Vec4 p = quat_product_raw(a.wxyz(), b.wxyz());
  return UnitQuaternion(p(0), p(1), p(2), p(3));
}

double quat_angle_error(const UnitQuaternion& a, const UnitQuaternion& b) {
  const double d = std::min(1.0, std::abs(a.dot(b)));
  return 2.0 * std::acos(d);
}

Vec4 quat_cost_residual(const UnitQuaternion& a, const UnitQuaternion& b) {
  const double s = a.dot(b) >= 0.0 ? 1.0 : -1.0;
  return a.wxyz() - s * b.wxyz();
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  return RigidTransform{quat_compose(a.rotation, b.rotation),
                        a.rotation.rotate(b.translation) + a.translation};
}

RigidTransform inverse(const RigidTransform& t) {
  const UnitQuaternion rc = t.rotation.conjugate();
  return RigidTransform{rc, -rc.rotate(t.translation)};
}

}  // namespace catchmpc
