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

#ifndef CATCHMPC_BALLISTICS_HPP_
#define CATCHMPC_BALLISTICS_HPP_

#include <optional>
#include <vector>

#include "catchmpc/types.hpp"

namespace catchmpc {

/// Ball state estimate: position/velocity mean with 6x6 covariance,
/// stamped with the time it refers to.
struct BallEstimate {
  Vec3 p = Vec3::Zero();   // m
  Vec3 v = Vec3::Zero();   // m/s
  Mat6 covariance = Mat6::Identity();
  double t = 0.0;          // s
};

struct TrajectorySample {
  double t;  // s
  Vec3 p;    // m
  Vec3 v;    // m/s
};

/// One timestamped position measurement (replay-log row).
struct MeasurementSample {
  double t = 0.0;  // s
  Vec3 p = Vec3::Zero();  // m
};

/// Future flight samples at uniform spacing, strictly increasing timestamps.
struct PredictedTrajectory {
  std::vector<TrajectorySample> samples;
};

struct FilterConfig {
  double dt = 1.0 / 30.0;             // s, nominal measurement period
  Vec3 gravity = Vec3(0, 0, -9.81);   // m/s^2
  double process_noise_accel = 0.5;   // (m/s^2)^2, white-acceleration intensity
  double measurement_noise = 1e-4;    // m^2, position variance per axis
  double init_pos_var = 0.01;         // m^2
  double init_vel_var = 25.0;         // (m/s)^2
  double floor_z = 0.0;               // m, prediction stops below this height

  void validate() const;
};

/// Initialize from the first position measurement: zero velocity mean with
/// a wide velocity prior.
BallEstimate kf_init(const Vec3& z, double t, const FilterConfig& cfg);

/// Time update over an explicit step. The constant-acceleration transition
/// is exact (includes the half-g*dt^2 term); Q follows the discrete
/// white-acceleration model scaled by process_noise_accel.
BallEstimate kf_predict(const BallEstimate& est, const FilterConfig& cfg,
                        double dt);

/// Time update over the nominal period cfg.dt.
inline BallEstimate kf_predict(const BallEstimate& est, const FilterConfig& cfg) {
  return kf_predict(est, cfg, cfg.dt);
}

/// Position-measurement correction (Joseph form). Returns nullopt when the
/// measurement is non-finite (perception dropout); the caller skips it.
std::optional<BallEstimate> kf_update(const BallEstimate& est, const Vec3& z,
                                      const FilterConfig& cfg);

/// Mean-only forward rollout: ceil(horizon_s / dt_pred) samples at
/// est.t + k*dt_pred, truncated at the first sample below cfg.floor_z.
PredictedTrajectory propagate(const BallEstimate& est, double horizon_s,
                              double dt_pred, const FilterConfig& cfg);

/// Single-writer wrapper used by the episode loop: keeps the latest estimate
/// and replays measurements with irregular timestamps.
class BallTracker {
 public:
  explicit BallTracker(const FilterConfig& cfg) : cfg_(cfg) {}

  bool initialized() const { return est_.has_value(); }
  const BallEstimate& estimate() const { return *est_; }
  const FilterConfig& config() const { return cfg_; }

  /// Predict to the measurement time, then correct. Non-finite measurements
  /// are dropped (the prediction still advances the clock).
  void ingest(const Vec3& z, double t);

 private:
  FilterConfig cfg_;
  std::optional<BallEstimate> est_;
};

}  // namespace catchmpc

#endif  // CATCHMPC_BALLISTICS_HPP_
