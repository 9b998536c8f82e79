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

#ifndef LEGMPC_LOCOMOTION_GAIT_HPP_
#define LEGMPC_LOCOMOTION_GAIT_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "legmpc/models/contact_plan.hpp"

namespace legmpc {

/// Periodic gait: leg l is in stance while frac(phase + offset_l) < duty.
struct GaitSpec {
  std::string name = "trot";
  double period = 0.4;  ///< seconds
  double duty = 0.5;
  std::array<double, kLegCount> offsets = {0.0, 0.5, 0.5, 0.0};  ///< FL FR RL RR

  static GaitSpec trot(double period = 0.4, double duty = 0.5) {
    return {"trot", period, duty, {0.0, 0.5, 0.5, 0.0}};
  }
  static GaitSpec stand() { return {"stand", 0.4, 1.0, {0.0, 0.0, 0.0, 0.0}}; }
  static GaitSpec walk(double period = 0.8, double duty = 0.75) {
    return {"walk", period, duty, {0.0, 0.5, 0.75, 0.25}};
  }

  /// Gait phase of `leg` in [0, 1) for a cycle phase in cycles.
  double leg_phase(int leg, double cycle_phase) const {
    const double ph = cycle_phase + offsets[leg];
    return ph - std::floor(ph);
  }

  bool in_stance(int leg, double cycle_phase) const {
    return duty >= 1.0 || leg_phase(leg, cycle_phase) < duty;
  }
};

class InfeasibleGaitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One optimized foothold: the stance interval [k_start, k_end] of a leg,
/// clipped to the horizon.
struct FootholdSlot {
  int leg = 0;
  int k_start = 0;
  int k_end = 0;
  /// The leg was already in stance before step 0 (interval clipped at 0).
  bool ongoing = false;
};

struct GaitSchedule {
  int N = 0;
  double dt = 0.0;
  std::vector<std::array<bool, kLegCount>> contact;  ///< per step, per leg
  std::vector<std::vector<int>> stance_sets;         ///< sigma_k: foothold indices
  std::vector<FootholdSlot> index_map;               ///< foothold index -> slot
  ContactPlan plan;

  int foothold_count() const { return static_cast<int>(index_map.size()); }

  /// Foothold index the leg stands on at step k, or kSwing.
  int foothold_at(int k, int leg) const { return plan.steps[k][leg]; }
};

inline bool operator==(const FootholdSlot& a, const FootholdSlot& b) {
  return a.leg == b.leg && a.k_start == b.k_start && a.k_end == b.k_end && a.ongoing == b.ongoing;
}

/**
 * Samples the gait at step midpoints t_k + dt/2 starting from `cycle_phase`
 * (gait cycles, fractional part used). Footholds are numbered in
 * touchdown order, ties broken by leg order.
 */
inline GaitSchedule build_gait_schedule(const GaitSpec& gait, double cycle_phase, int N, double dt,
                                        bool require_stance = false) {
  if (N <= 0 || !(dt > 0.0)) throw std::invalid_argument("build_gait_schedule: bad horizon");
  if (!(gait.period > 0.0) || !(gait.duty > 0.0) || gait.duty > 1.0) {
    throw std::invalid_argument("build_gait_schedule: bad gait period or duty");
  }
  GaitSchedule s;
  s.N = N;
  s.dt = dt;
  s.contact.resize(N);
  const double phase0 = cycle_phase - std::floor(cycle_phase);
  auto stance_at = [&](int k, int leg) {
    return gait.in_stance(leg, phase0 + (k + 0.5) * dt / gait.period);
  };
  for (int k = 0; k < N; ++k) {
    for (int leg = 0; leg < kLegCount; ++leg) s.contact[k][leg] = stance_at(k, leg);
  }

  for (int leg = 0; leg < kLegCount; ++leg) {
    int k = 0;
    while (k < N) {
      if (!s.contact[k][leg]) {
        ++k;
        continue;
      }
      FootholdSlot slot{leg, k, k, k == 0 && stance_at(-1, leg)};
      while (slot.k_end + 1 < N && s.contact[slot.k_end + 1][leg]) ++slot.k_end;
      s.index_map.push_back(slot);
      k = slot.k_end + 1;
    }
  }
  std::stable_sort(s.index_map.begin(), s.index_map.end(),
                   [](const FootholdSlot& a, const FootholdSlot& b) {
                     return a.k_start != b.k_start ? a.k_start < b.k_start : a.leg < b.leg;
                   });

  s.plan.foothold_count = s.foothold_count();
  s.plan.steps.assign(N, {kSwing, kSwing, kSwing, kSwing});
  s.stance_sets.assign(N, {});
  for (int i = 0; i < s.foothold_count(); ++i) {
    const FootholdSlot& slot = s.index_map[i];
    for (int k = slot.k_start; k <= slot.k_end; ++k) {
      s.plan.steps[k][slot.leg] = i;
      s.stance_sets[k].push_back(i);
    }
  }
  for (auto& set : s.stance_sets) std::sort(set.begin(), set.end());

  if (require_stance) {
    for (int k = 0; k < N; ++k) {
      if (s.stance_sets[k].empty()) {
        throw InfeasibleGaitError("gait '" + gait.name + "' has no stance foot at step " +
                                  std::to_string(k));
      }
    }
  }
  return s;
}

}  // namespace legmpc

#endif  // LEGMPC_LOCOMOTION_GAIT_HPP_
