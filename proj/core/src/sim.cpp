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

#include "catchmpc/sim.hpp"

#include <cmath>

namespace catchmpc {

SystemState plant_advance(const SystemState& state, const Vec14& u0, double ts,
                          Tracking& tracking) {
  Vec14 accel;
  if (tracking.mode == TrackingMode::ideal || !(tracking.tau > 0.0)) {
    accel = u0;
  } else {
    const double decay = std::exp(-ts / tracking.tau);
    accel = u0 + (tracking.accel - u0) * decay;
  }
  tracking.accel = accel;

  SystemState next;
  next.q = state.q + ts * state.qdot + 0.5 * ts * ts * accel;
  next.qdot = state.qdot + ts * accel;
  return next;
}

bool catch_check(const Vec3& ball_p, const Vec3& ball_v, const Pose& catcher,
                 double r_catch) {
  if (!(ball_v.z() < 0.0)) return false;
  const Vec3 rel = ball_p - catcher.p;
  if (rel.norm() > r_catch) return false;
  const Vec3 opening = catcher.phi.rotate(Vec3::UnitZ());
  return rel.dot(opening) >= 0.0;
}

const char* to_string(EpisodeResult::Outcome outcome) {
  switch (outcome) {
    case EpisodeResult::Outcome::caught: return "caught";
    case EpisodeResult::Outcome::missed: return "missed";
    case EpisodeResult::Outcome::no_target: return "no_target";
    case EpisodeResult::Outcome::aborted: return "aborted";
  }
  return "unknown";
}

const char* to_string(TrackingMode mode) {
  return mode == TrackingMode::ideal ? "ideal" : "first_order";
}

}  // namespace catchmpc
