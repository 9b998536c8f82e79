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

#ifndef LEGMPC_LOCOMOTION_REFERENCES_HPP_
#define LEGMPC_LOCOMOTION_REFERENCES_HPP_

#include <Eigen/Geometry>

#include <cmath>
#include <vector>

#include "legmpc/locomotion/gait.hpp"
#include "legmpc/models/quaternion.hpp"

namespace legmpc {

struct CommandInput {
  Eigen::Vector2d v_xy = Eigen::Vector2d::Zero();  ///< heading frame, m/s
  double yaw_rate = 0.0;                           ///< rad/s
  double target_height = 0.3;                      ///< m

  /// Optional pull of the reference toward a nominal planar position that
  /// itself advances with the commanded velocity. 0 disables it.
  double hold_gain = 0.0;  ///< 1/s
  Eigen::Vector2d hold_anchor = Eigen::Vector2d::Zero();
};

struct ReferencePlan {
  std::vector<Vector3> r_ref;  ///< N+1 base positions
  std::vector<double> h_ref;   ///< N+1 heights
  std::vector<double> yaw_ref;
  std::vector<Vector4> q_ref;  ///< N+1 yaw-only orientations
  std::vector<Vector3> s_ref;  ///< one per foothold
};

inline Eigen::Matrix2d planar_rotation(double yaw) {
  return Eigen::Rotation2Dd(yaw).toRotationMatrix();
}

/**
 * Integrates the command from the current planar position `r0` and heading
 * `yaw0`: positions follow v_xy rotated by the accumulated yaw, heights stay
 * at the target height.
 */
inline ReferencePlan reference_base_trajectory(const CommandInput& cmd, const Vector3& r0,
                                               double yaw0, int N, double dt) {
  ReferencePlan plan;
  plan.r_ref.resize(N + 1);
  plan.h_ref.assign(N + 1, cmd.target_height);
  plan.yaw_ref.resize(N + 1);
  plan.q_ref.resize(N + 1);
  Eigen::Vector2d pos = r0.head<2>();
  Eigen::Vector2d anchor = cmd.hold_anchor;
  for (int k = 0; k <= N; ++k) {
    const double yaw = yaw0 + cmd.yaw_rate * k * dt;
    plan.yaw_ref[k] = yaw;
    plan.q_ref[k] = quat::from_yaw(yaw);
    plan.r_ref[k] = Vector3(pos.x(), pos.y(), cmd.target_height);
    const Eigen::Vector2d v = planar_rotation(yaw) * cmd.v_xy;
    Eigen::Vector2d vel = v;
    if (cmd.hold_gain > 0.0) vel += cmd.hold_gain * (anchor - pos);
    pos += dt * vel;
    anchor += dt * v;
  }
  return plan;
}

/**
 * Impact-to-impact heuristic: each foothold is the ground projection of its
 * hip, evaluated on the reference base trajectory at the middle of the
 * (horizon-clipped) stance interval.
 */
inline std::vector<Vector3> reference_footholds(const GaitSchedule& schedule,
                                                const ReferencePlan& base,
                                                const std::array<Vector3, kLegCount>& hip_offsets,
                                                double terrain_height = 0.0) {
  std::vector<Vector3> s_ref;
  s_ref.reserve(schedule.index_map.size());
  const int last = static_cast<int>(base.r_ref.size()) - 1;
  for (const FootholdSlot& slot : schedule.index_map) {
    const double t = 0.5 * (slot.k_start + slot.k_end + 1);
    const int k0 = std::clamp(static_cast<int>(std::floor(t)), 0, last);
    const int k1 = std::min(k0 + 1, last);
    const double a = std::clamp(t - k0, 0.0, 1.0);
    const Vector3 r = (1.0 - a) * base.r_ref[k0] + a * base.r_ref[k1];
    const double yaw = (1.0 - a) * base.yaw_ref[k0] + a * base.yaw_ref[k1];
    const Eigen::Vector2d hip = r.head<2>() + planar_rotation(yaw) * hip_offsets[slot.leg].head<2>();
    s_ref.emplace_back(hip.x(), hip.y(), terrain_height);
  }
  return s_ref;
}

}  // namespace legmpc

#endif  // LEGMPC_LOCOMOTION_REFERENCES_HPP_
