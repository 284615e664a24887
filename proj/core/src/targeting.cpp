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

#include "catchmpc/targeting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace catchmpc {

void SafeZone::validate() const {
  if (!(min_corner.array() < max_corner.array()).all()) {
    throw std::invalid_argument("SafeZone: min_corner must be < max_corner elementwise");
  }
}

std::vector<TrajectorySample> filter_safe(const PredictedTrajectory& traj,
                                          const SafeZone& zone) {
  std::vector<TrajectorySample> out;
  out.reserve(traj.samples.size());
  for (const TrajectorySample& s : traj.samples) {
    if (zone.contains(s.p)) out.push_back(s);
  }
  return out;
}

std::optional<UnitQuaternion> impact_orientation(const Vec3& v_catch,
                                                 bool opening_axis_world_up,
                                                 double v_min_impact) {
  const double speed = v_catch.norm();
  if (!(speed > v_min_impact)) return std::nullopt;
  const Vec3 d_impact = v_catch / speed;

  Vec3 opening;   // world direction of the catcher +z axis
  Vec3 lateral;   // world direction of the catcher +x axis
  if (opening_axis_world_up) {
    opening = Vec3::UnitZ();
    Vec3 proj(-d_impact.x(), -d_impact.y(), 0.0);
    lateral = proj.norm() < 1e-6 ? Vec3::UnitX() : Vec3(proj.normalized());
  } else {
    opening = -d_impact;
    // Any deterministic lateral axis orthogonal to the opening.
    Vec3 seed = std::abs(opening.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    lateral = (seed - seed.dot(opening) * opening).normalized();
  }

  Mat3 r;
  r.col(0) = lateral;
  r.col(2) = opening;
  r.col(1) = opening.cross(lateral);
  return UnitQuaternion::from_rotation_matrix(r);
}

std::optional<TargetPose> select_target(
    const std::vector<TrajectorySample>& candidates, const Pose& catcher_now,
    double t_now, const TargetingConfig& cfg,
    const std::optional<UnitQuaternion>& prev_orientation) {
  // Sort by time so the result is invariant under input permutation; the
  // position tiebreak only matters for duplicated timestamps.
  std::vector<const TrajectorySample*> sorted;
  sorted.reserve(candidates.size());
  for (const TrajectorySample& s : candidates) {
    if (s.t > t_now) sorted.push_back(&s);
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const TrajectorySample* a, const TrajectorySample* b) {
              if (a->t != b->t) return a->t < b->t;
              return std::lexicographical_compare(
                  a->p.data(), a->p.data() + 3, b->p.data(), b->p.data() + 3);
            });

  const TrajectorySample* best = nullptr;
  double best_v = 0.0;
  for (const TrajectorySample* s : sorted) {
    const double avg_v = (s->p - catcher_now.p).norm() / (s->t - t_now);
    // Strictly-smaller comparison in time order resolves ties to earlier t.
    if (best == nullptr || avg_v < best_v) {
      best = s;
      best_v = avg_v;
    }
  }
  if (best == nullptr) return std::nullopt;

  TargetPose target;
  target.pose.p = best->p;
  target.t_catch = best->t;
  target.impact_velocity = best->v;
  const auto phi = impact_orientation(best->v, cfg.opening_axis_world_up,
                                      cfg.v_min_impact);
  if (phi.has_value()) {
    target.pose.phi = *phi;
  } else if (prev_orientation.has_value()) {
    target.pose.phi = *prev_orientation;
  } else {
    target.pose.phi = UnitQuaternion::identity();
  }
  return target;
}

}  // namespace catchmpc
