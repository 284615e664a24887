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

#include "catchmpc/ballistics.hpp"

#include <cmath>
#include <stdexcept>

namespace catchmpc {

void FilterConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("FilterConfig: dt must be > 0");
  if (!(process_noise_accel > 0.0) || !(measurement_noise > 0.0)) {
    throw std::invalid_argument("FilterConfig: noise scalars must be > 0");
  }
}

BallEstimate kf_init(const Vec3& z, double t, const FilterConfig& cfg) {
  BallEstimate est;
  est.p = z;
  est.v = Vec3::Zero();
  est.covariance = Mat6::Zero();
  est.covariance.topLeftCorner<3, 3>() = cfg.init_pos_var * Mat3::Identity();
  est.covariance.bottomRightCorner<3, 3>() = cfg.init_vel_var * Mat3::Identity();
  est.t = t;
  return est;
}

BallEstimate kf_predict(const BallEstimate& est, const FilterConfig& cfg,
                        double dt) {
  BallEstimate out;
  out.p = est.p + est.v * dt + 0.5 * cfg.gravity * dt * dt;
  out.v = est.v + cfg.gravity * dt;
  out.t = est.t + dt;

  Mat6 f = Mat6::Identity();
  f.topRightCorner<3, 3>() = dt * Mat3::Identity();

  const double qa = cfg.process_noise_accel;
  Mat6 q = Mat6::Zero();
  q.topLeftCorner<3, 3>() = (qa * dt * dt * dt * dt / 4.0) * Mat3::Identity();
  q.topRightCorner<3, 3>() = (qa * dt * dt * dt / 2.0) * Mat3::Identity();
  q.bottomLeftCorner<3, 3>() = q.topRightCorner<3, 3>();
  q.bottomRightCorner<3, 3>() = (qa * dt * dt) * Mat3::Identity();

  Mat6 p = f * est.covariance * f.transpose() + q;
  out.covariance = 0.5 * (p + p.transpose());
  return out;
}

std::optional<BallEstimate> kf_update(const BallEstimate& est, const Vec3& z,
                                      const FilterConfig& cfg) {
  if (!z.allFinite()) return std::nullopt;

  const Mat3 r = cfg.measurement_noise * Mat3::Identity();
  // H = [I 0]; innovation covariance is the position block plus R.
  const Mat3 s = est.covariance.topLeftCorner<3, 3>() + r;
  const Eigen::Matrix<double, 6, 3> pht = est.covariance.leftCols<3>();
  const Eigen::Matrix<double, 6, 3> k = pht * s.inverse();

  const Vec3 innovation = z - est.p;
  const Vec6 dx = k * innovation;

  BallEstimate out = est;
  out.p += dx.head<3>();
  out.v += dx.tail<3>();

  // Joseph form keeps the posterior PSD even with tiny R.
  Mat6 ikh = Mat6::Identity();
  ikh.leftCols<3>() -= k;
  Mat6 p = ikh * est.covariance * ikh.transpose() + k * r * k.transpose();
  out.covariance = 0.5 * (p + p.transpose());
  return out;
}

PredictedTrajectory propagate(const BallEstimate& est, double horizon_s,
                              double dt_pred, const FilterConfig& cfg) {
  if (!(horizon_s > 0.0) || !(dt_pred > 0.0)) {
    throw std::invalid_argument("propagate: horizon_s and dt_pred must be > 0");
  }
  const int n = static_cast<int>(std::ceil(horizon_s / dt_pred));
  PredictedTrajectory traj;
  traj.samples.reserve(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    const double tau = k * dt_pred;
    TrajectorySample s;
    s.t = est.t + tau;
    s.p = est.p + est.v * tau + 0.5 * cfg.gravity * tau * tau;
    s.v = est.v + cfg.gravity * tau;
    if (s.p.z() < cfg.floor_z) break;
    traj.samples.push_back(s);
  }
  return traj;
}

void BallTracker::ingest(const Vec3& z, double t) {
  if (!est_.has_value()) {
    if (!z.allFinite()) return;
    est_ = kf_init(z, t, cfg_);
    return;
  }
  const double dt = t - est_->t;
  if (dt > 0.0) {
    est_ = kf_predict(*est_, cfg_, dt);
  }
  if (auto updated = kf_update(*est_, z, cfg_)) {
    est_ = *updated;
  }
}

}  // namespace catchmpc
