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

#ifndef LEGMPC_SIM_MPC_HPP_
#define LEGMPC_SIM_MPC_HPP_

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "legmpc/scenarios/scenario.hpp"

namespace legmpc {

/// Exact robot state as read from the simulator.
struct RobotMeasurement {
  Vector3 r = Vector3::Zero();
  Vector3 v = Vector3::Zero();
  Vector4 q = quat::identity();
  Vector3 omega_body = Vector3::Zero();
  std::array<std::optional<Vector3>, kLegCount> contacts{};

  bool finite() const { return r.allFinite() && v.allFinite() && q.allFinite() && omega_body.allFinite(); }
};

/// Commanded nominal pose: the start pose advanced by the command history.
struct NominalPose {
  Eigen::Vector2d xy = Eigen::Vector2d::Zero();
  double yaw = 0.0;
};

struct MpcPlan {
  double t = 0.0;  ///< time of the measurement the plan starts from
  LocomotionOcp ocp;
  Vector U;
  Vector X;
  SolveStats stats;
  bool degraded = false;
  bool cold_start = true;   ///< no previous plan existed
  bool fresh_guess = true;  ///< solve started from U_init rather than the shifted plan
  double solve_ms = 0.0;  ///< wall time of all attempts for this plan

  /// Plan step that covers time t_now.
  int step_at(double t_now) const {
    const int j = static_cast<int>(std::floor((t_now - t) / ocp.dims.dt + 1e-9));
    return std::clamp(j, 0, ocp.dims.N - 1);
  }
};

struct MpcState {
  std::optional<MpcPlan> plan;
};

inline double gait_cycle_phase(const GaitSpec& gait, double t) { return t / gait.period; }

/// Per-robot problem data for a horizon starting at time t.
inline std::vector<RobotSetup> build_robot_setups(const Scenario& sc, double t,
                                                  const std::vector<RobotMeasurement>& meas,
                                                  const std::vector<NominalPose>& nominal) {
  std::vector<RobotSetup> setups;
  for (std::size_t ri = 0; ri < sc.robots.size(); ++ri) {
    const RobotMeasurement& m = meas[ri];
    RobotSetup s;
    s.params = sc.robots[ri].params;
    s.schedule = build_gait_schedule(sc.gait, gait_cycle_phase(sc.gait, t), sc.N, sc.dt,
                                     sc.model == ModelKind::kIpm);
    CommandInput cmd = sc.command_at(static_cast<int>(ri), t);
    cmd.hold_anchor = nominal[ri].xy;
    s.plan = reference_base_trajectory(cmd, m.r, nominal[ri].yaw, sc.N, sc.dt);
    s.plan.s_ref = reference_footholds(s.schedule, s.plan, s.params.hip_offsets);
    s.x0 = sc.model == ModelKind::kIpm ? ipm_state_vector(m.r, m.v, sc.dt)
                                       : srbm_state_vector(m.r, m.v, m.q, m.omega_body, sc.dt);
    s.contacts = m.contacts;
    s.optimize_footholds = sc.optimize_footholds;
    setups.push_back(std::move(s));
  }
  return setups;
}

/**
 * Time-shifted previous plan as a starting point for `next`.
 *
 * Controls of step k come from old step k + shift when every robot has the
 * same contact pattern there, otherwise from next.U_init. A foothold takes
 * the optimized value of the old foothold of the same leg whose stance
 * interval overlaps its own; new footholds start at s_ref. Frozen entries
 * keep their U_init value.
 */
inline Vector warm_start(const LocomotionOcp& next, const MpcPlan& prev, double t) {
  const LocomotionOcp& old = prev.ocp;
  const ProblemDims& d = next.dims;
  Vector U = next.U_init;
  if (old.dims.n != d.n || old.dims.m != d.m || old.robot_count() != next.robot_count()) return U;
  const int shift = static_cast<int>(std::lround((t - prev.t) / d.dt));
  for (int k = 0; k < d.N; ++k) {
    const int j = k + shift;
    if (j < 0 || j >= old.dims.N) continue;
    bool same = true;
    for (int r = 0; r < next.robot_count(); ++r) {
      same = same && next.schedules[r].contact[k] == old.schedules[r].contact[j];
    }
    if (same) U.segment(d.control_offset(k), d.m) = prev.U.segment(old.dims.control_offset(j), d.m);
  }
  for (int r = 0; r < next.robot_count(); ++r) {
    const GaitSchedule& ns = next.schedules[r];
    const GaitSchedule& os = old.schedules[r];
    for (int i = 0; i < ns.foothold_count(); ++i) {
      const FootholdSlot& a = ns.index_map[i];
      for (int o = 0; o < os.foothold_count(); ++o) {
        const FootholdSlot& b = os.index_map[o];
        if (b.leg != a.leg) continue;
        if (a.k_start + shift > b.k_end || a.k_end + shift < b.k_start) continue;
        U.segment<3>(next.footholds[r].u_offset + 3 * i) =
            prev.U.segment<3>(old.footholds[r].u_offset + 3 * o);
        break;
      }
    }
  }
  for (int i : next.frozen) U[i] = next.U_init[i];
  return U;
}

/**
 * One receding-horizon update: rebuild schedule and references at time t,
 * start from the shifted previous plan or U_init, whichever costs less, and
 * solve. A non-converged solve yields the best iterate flagged as degraded.
 * Throws DivergedRolloutError only if neither start can be rolled out.
 */
inline MpcPlan mpc_step(const MpcState& state, double t, const std::vector<RobotMeasurement>& meas,
                        const std::vector<NominalPose>& nominal, const Scenario& sc) {
  for (const RobotMeasurement& m : meas) {
    if (!m.finite()) throw std::invalid_argument("mpc_step: non-finite measurement");
  }
  MpcPlan plan;
  plan.t = t;
  plan.ocp = assemble_locomotion_ocp(sc.model, build_robot_setups(sc, t, meas, nominal),
                                     sc.weights, {0.0, sc.smooth_eps});
  add_scenario_costs(sc, plan.ocp);
  plan.cold_start = !state.plan.has_value();
  plan.fresh_guess = plan.cold_start;
  const auto t_choice = std::chrono::steady_clock::now();
  Vector U0 = plan.ocp.U_init;
  // Open-loop forces replayed from a slightly different attitude can spin a
  // light body, so the shifted plan must beat the fresh guess to be used.
  if (!plan.cold_start) {
    const LocomotionOcp& ocp = plan.ocp;
    auto cost_of = [&](const Vector& U) {
      try {
        return total_cost(ocp.costs, CostInputs{ocp.dims, ocp.x0, rollout(*ocp.model, ocp.x0, U), U});
      } catch (const DivergedRolloutError&) {
        return std::numeric_limits<double>::infinity();
      }
    };
    Vector shifted = warm_start(ocp, *state.plan, t);
    plan.fresh_guess = cost_of(ocp.U_init) < cost_of(shifted);
    if (!plan.fresh_guess) U0 = std::move(shifted);
  }

  SolveResult res;
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_choice).count();
  try {
    res = plan.ocp.solve(U0, sc.solver);
    wall += res.stats.wall_time;
  } catch (const DivergedRolloutError&) {
    if (plan.fresh_guess) throw;
    plan.fresh_guess = true;
    res = plan.ocp.solve(plan.ocp.U_init, sc.solver);
    wall += res.stats.wall_time;
  }
  plan.U = std::move(res.U);
  plan.X = std::move(res.X);
  plan.stats = std::move(res.stats);
  plan.degraded = !plan.stats.converged;
  plan.stats.wall_time = wall;
  plan.solve_ms = 1e3 * wall;
  return plan;
}

/// Stateful wrapper around mpc_step.
class MpcController {
 public:
  explicit MpcController(const Scenario& sc) : sc_(sc) {}

  const MpcPlan& update(double t, const std::vector<RobotMeasurement>& meas,
                        const std::vector<NominalPose>& nominal) {
    state_.plan = mpc_step(state_, t, meas, nominal, sc_);
    return *state_.plan;
  }

  const MpcState& state() const { return state_; }
  void reset() { state_.plan.reset(); }

 private:
  const Scenario& sc_;
  MpcState state_;
};

}  // namespace legmpc

#endif  // LEGMPC_SIM_MPC_HPP_
