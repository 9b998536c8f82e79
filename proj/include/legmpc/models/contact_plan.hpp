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

#ifndef LEGMPC_MODELS_CONTACT_PLAN_HPP_
#define LEGMPC_MODELS_CONTACT_PLAN_HPP_

#include <array>
#include <vector>

#include "legmpc/models/robot_params.hpp"

namespace legmpc {

inline constexpr int kSwing = -1;

/// Which optimized foothold each leg stands on at each step (kSwing if none).
struct ContactPlan {
  int foothold_count = 0;
  std::vector<std::array<int, kLegCount>> steps;

  int horizon() const { return static_cast<int>(steps.size()); }
  bool in_stance(int k, int leg) const { return steps[k][leg] != kSwing; }

  int stance_count(int k) const {
    int c = 0;
    for (int leg = 0; leg < kLegCount; ++leg) c += in_stance(k, leg) ? 1 : 0;
    return c;
  }
};

/// Where one robot's blocks sit inside a (possibly multi-robot) problem.
struct RobotLayout {
  int state_offset = 0;    ///< within x_k
  int control_offset = 0;  ///< within u_k
  int param_offset = 0;    ///< within p
};

}  // namespace legmpc

#endif  // LEGMPC_MODELS_CONTACT_PLAN_HPP_
