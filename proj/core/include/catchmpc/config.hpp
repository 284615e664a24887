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

#ifndef CATCHMPC_CONFIG_HPP_
#define CATCHMPC_CONFIG_HPP_

#include <cstdint>
#include <string>

#include "catchmpc/ballistics.hpp"
#include "catchmpc/ocp.hpp"
#include "catchmpc/sim.hpp"
#include "catchmpc/targeting.hpp"

namespace catchmpc {

/// Planner configuration, loadable from JSON. Every field has a default;
/// the profile resolves mode and weights unless profile == "custom", in
/// which case the weights block is required.
struct PlannerConfig {
  std::string profile = "at_balanced";
  PlannerMode mode = PlannerMode::at;
  PlannerWeights weights = planner_profile("at_balanced").weights;
  int horizon = 20;
  double ts = 0.04;  // s
  OcpSolveOptions solve;
  double chain_soft_tol = 1e-3;  // accept max_iter plans up to this violation
  SafeZone safe_zone{Vec3(0.25, -0.35, 0.25), Vec3(0.95, 0.35, 0.95)};
  TargetingConfig targeting;
  FilterConfig filter;
  SimParams sim;

  void validate() const;
};

/// Parse / write the planner JSON config. Parse failures throw
/// std::runtime_error naming the offending field.
PlannerConfig load_planner_config(const std::string& path);
void save_planner_config(const PlannerConfig& cfg, const std::string& path);

/// Scenario JSON I/O.
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& scenario, const std::string& path);

/// FNV-1a hash of the scenario's canonical JSON serialization. Identical
/// scenarios hash identically across runs and processes; the Monte-Carlo
/// pairing discipline is asserted with this.
std::uint64_t scenario_hash(const Scenario& scenario);

}  // namespace catchmpc

#endif  // CATCHMPC_CONFIG_HPP_
