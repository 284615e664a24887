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

// Model-file schema (JSON, all angles rad, all lengths m):
//
// {
//   "name": "<string>",
//   "convention": "mdh",          // fixed; rows are modified DH:
//                                 // T_i = RotX(alpha)*TransX(a)*RotZ(theta0+q_i)*TransZ(d)
//   "arms": {
//     "left": {
//       "base_transform":  {"rotation": [w,x,y,z], "translation": [x,y,z]},
//       "rows": [ {"alpha":..,"a":..,"d":..,"theta0":..} x7 ],
//       "grasp_transform": {"rotation": [w,x,y,z], "translation": [x,y,z]},
//       "q_min": [..x7], "q_max": [..x7], "qd_max": [..x7], "qdd_max": [..x7]
//     },
//     "right": { ... }
//   },
//   "d_nom": <m>
// }
//
// Quaternions serialize as [w, x, y, z] everywhere.

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "catchmpc/kinematics.hpp"

namespace catchmpc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw std::runtime_error("model file: field '" + field + "': " + what);
}

const json& require(const json& j, const std::string& key,
                    const std::string& context) {
  auto it = j.find(key);
  if (it == j.end()) fail(context + key, "missing");
  return *it;
}

template <int N>
Eigen::Matrix<double, N, 1> parse_vec(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != N) {
    fail(field, "expected array of " + std::to_string(N) + " numbers");
  }
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v(i) = j[i].get<double>();
  return v;
}

RigidTransform parse_transform(const json& j, const std::string& field) {
  const Vec4 q = parse_vec<4>(require(j, "rotation", field + "."), field + ".rotation");
  const Vec3 t = parse_vec<3>(require(j, "translation", field + "."), field + ".translation");
  return RigidTransform{UnitQuaternion(q(0), q(1), q(2), q(3)), t};
}

ArmModel parse_arm(const json& j, const std::string& field) {
  ArmModel arm;
  arm.base_transform = parse_transform(require(j, "base_transform", field + "."),
                                       field + ".base_transform");
  arm.grasp_transform = parse_transform(require(j, "grasp_transform", field + "."),
                                        field + ".grasp_transform");
  const json& rows = require(j, "rows", field + ".");
  if (!rows.is_array() || rows.size() != kArmDof) {
    fail(field + ".rows", "expected exactly 7 rows");
  }
  for (int i = 0; i < kArmDof; ++i) {
    const json& r = rows[i];
    const std::string rf = field + ".rows[" + std::to_string(i) + "].";
    arm.rows[i].alpha = require(r, "alpha", rf).get<double>();
    arm.rows[i].a = require(r, "a", rf).get<double>();
    arm.rows[i].d = require(r, "d", rf).get<double>();
    arm.rows[i].theta0 = require(r, "theta0", rf).get<double>();
  }
  arm.q_min = parse_vec<kArmDof>(require(j, "q_min", field + "."), field + ".q_min");
  arm.q_max = parse_vec<kArmDof>(require(j, "q_max", field + "."), field + ".q_max");
  arm.qd_max = parse_vec<kArmDof>(require(j, "qd_max", field + "."), field + ".qd_max");
  arm.qdd_max = parse_vec<kArmDof>(require(j, "qdd_max", field + "."), field + ".qdd_max");
  return arm;
}

json transform_to_json(const RigidTransform& t) {
  const Vec4 q = t.rotation.wxyz();
  return json{{"rotation", {q(0), q(1), q(2), q(3)}},
              {"translation", {t.translation(0), t.translation(1), t.translation(2)}}};
}

json arm_to_json(const ArmModel& arm) {
  json rows = json::array();
  for (const DhRow& r : arm.rows) {
    rows.push_back({{"alpha", r.alpha}, {"a", r.a}, {"d", r.d}, {"theta0", r.theta0}});
  }
  auto vec = [](const Vec7& v) {
    return std::vector<double>(v.data(), v.data() + kArmDof);
  };
  return json{{"base_transform", transform_to_json(arm.base_transform)},
              {"rows", rows},
              {"grasp_transform", transform_to_json(arm.grasp_transform)},
              {"q_min", vec(arm.q_min)},
              {"q_max", vec(arm.q_max)},
              {"qd_max", vec(arm.qd_max)},
              {"qdd_max", vec(arm.qdd_max)}};
}

}  // namespace

SystemModel load_system_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("model file: cannot open '" + path + "'");
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("model file '" + path + "': " + e.what());
  }

  SystemModel model;
  model.name = require(j, "name", "").get<std::string>();
  const std::string convention = require(j, "convention", "").get<std::string>();
  if (convention != "mdh") {
    fail("convention", "only 'mdh' is supported, got '" + convention + "'");
  }
  const json& arms = require(j, "arms", "");
  model.left = parse_arm(require(arms, "left", "arms."), "arms.left");
  model.right = parse_arm(require(arms, "right", "arms."), "arms.right");
  model.d_nom = require(j, "d_nom", "").get<double>();

  try {
    model.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error("model file '" + path + "': " + e.what());
  }
  return model;
}

void save_system_model(const SystemModel& model, const std::string& path) {
  json j{{"name", model.name},
         {"convention", "mdh"},
         {"arms", {{"left", arm_to_json(model.left)}, {"right", arm_to_json(model.right)}}},
         {"d_nom", model.d_nom}};
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("model file: cannot write '" + path + "'");
  }
  out << j.dump(2) << "\n";
}

}  // namespace catchmpc
