// Copyright 2026 The legmpc Authors
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

#ifndef LEGMPC_MODELS_ROBOT_PARAMS_HPP_
#define LEGMPC_MODELS_ROBOT_PARAMS_HPP_

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <array>
#include <cmath>
#include <string>

#include "legmpc/io/yaml_util.hpp"

namespace legmpc {

inline constexpr int kLegCount = 4;
inline constexpr std::array<const char*, kLegCount> kLegNames = {"FL", "FR", "RL", "RR"};

struct RobotParams {
  double mass = 0.0;
  Eigen::Matrix3d inertia_body = Eigen::Matrix3d::Zero();
  Eigen::Vector3d gravity = Eigen::Vector3d(0.0, 0.0, -9.81);
  std::array<Eigen::Vector3d, kLegCount> hip_offsets{};  ///< base frame, order FL FR RL RR

  /// Empty string when valid, otherwise the name of the bad field.
  std::string invalid_field() const {
    if (!(mass > 0.0) || !std::isfinite(mass)) return "mass";
    if (!inertia_body.allFinite() || !inertia_body.isApprox(inertia_body.transpose(), 1e-12)) {
      return "inertia";
    }
    Eigen::LLT<Eigen::Matrix3d> llt(inertia_body);
    if (llt.info() != Eigen::Success) return "inertia";
    if (!gravity.allFinite()) return "gravity";
    for (const auto& h : hip_offsets) {
      if (!h.allFinite()) return "hip_offsets";
    }
    return {};
  }
};

/// Reads the key-value robot description:
///   mass: kg
///   inertia: 3 diagonal entries or 9 row-major entries, kg m^2
///   gravity: 3-vector (optional, default (0, 0, -9.81))
///   hip_offsets: four 3-vectors in FL, FR, RL, RR order
inline RobotParams parse_robot_params(const yaml::Field& f) {
  f.require_keys({"mass", "inertia", "gravity", "hip_offsets"});
  RobotParams rp;
  rp.mass = f["mass"].as<double>();
  const yaml::Field inertia = f["inertia"];
  const Eigen::VectorXd I = inertia.vector(-1);
  if (I.size() == 3) {
    rp.inertia_body = I.asDiagonal();
  } else if (I.size() == 9) {
    rp.inertia_body = Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(I.data());
  } else {
    inertia.fail("expected 3 diagonal or 9 row-major entries");
  }
  if (f["gravity"].defined()) rp.gravity = f["gravity"].vec3();
  const yaml::Field hips = f["hip_offsets"];
  if (hips.size() != kLegCount) hips.fail("expected four hip offsets (FL, FR, RL, RR)");
  for (int i = 0; i < kLegCount; ++i) rp.hip_offsets[i] = hips[i].vec3();
  const std::string bad = rp.invalid_field();
  if (!bad.empty()) f[bad].fail("invalid robot parameter");
  return rp;
}

inline RobotParams load_robot_params(const std::string& path) {
  return parse_robot_params(yaml::Field(yaml::parse_file(path), "", path));
}

}  // namespace legmpc

#endif  // LEGMPC_MODELS_ROBOT_PARAMS_HPP_
