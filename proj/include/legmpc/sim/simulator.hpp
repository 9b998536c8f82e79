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

#ifndef LEGMPC_SIM_SIMULATOR_HPP_
#define LEGMPC_SIM_SIMULATOR_HPP_

#include <cmath>
#include <string>
#include <vector>

#include "legmpc/sim/mpc.hpp"
#include "legmpc/sim/sim_log.hpp"

namespace legmpc {

/// Ground-truth state of one robot.
using SimRobotState = RobotMeasurement;

/// Velocity jump of a body-frame impulse; `R` maps body to world.
inline Vector3 disturbance_delta_v(const Vector3& impulse_body, const Matrix3& R, double mass) {
  return R * impulse_body / mass;
}

/// Adds the velocity jump; positions and contacts are unchanged.
inline SimRobotState apply_disturbance(const SimRobotState& s, const Vector3& delta_v) {
  SimRobotState out = s;
  out.v += delta_v;
  return out;
}

/// Same jump on a position-pair state [r, r_prev, ...]: r_prev moves so that
/// (r - r_prev) / dt gains delta_v.
inline Vector apply_disturbance(const Vector& x, const Vector3& delta_v, double dt) {
  Vector out = x;
  out.segment<3>(3) -= delta_v * dt;
  return out;
}

/**
 * Receding-horizon loop around the plan model integrated with semi-implicit
 * Euler at a quarter of the planning step. Each substep follows the plan
 * step that covers it: its contact pattern, its control and the planned
 * foothold of every leg that touches down (projected to the ground).
 */
class Simulator {
 public:
  explicit Simulator(const Scenario& sc) : sc_(sc), mpc_(sc) {}

  SimLog run() {
    SimLog log;
    log.scenario = sc_.name;
    log.model = to_string(sc_.model);
    log.seed = sc_.seed;
    log.duration = sc_.duration;
    log.robot_count = static_cast<int>(sc_.robots.size());
    log.record_timing = sc_.record_timing;
    log.terrain = sc_.terrain;

    const double h = sc_.substep();
    const long steps = std::lround(sc_.duration / h);
    const long replan_every = std::max(1L, std::lround(sc_.replan_period / h));
    std::vector<SimRobotState> state;
    std::vector<NominalPose> nominal;
    for (const RobotSpec& r : sc_.robots) {
      SimRobotState s;
      s.r = r.position;
      s.v = r.velocity;
      s.q = quat::from_yaw(r.yaw);
      state.push_back(s);
      nominal.push_back({r.position.head<2>(), r.yaw});
    }
    std::vector<bool> applied(sc_.disturbances.size(), false);
    const MpcPlan* plan = nullptr;
    bool replanned = false;

    for (long i = 0; i <= steps; ++i) {
      const double t = i * h;
      for (std::size_t d = 0; d < sc_.disturbances.size(); ++d) {
        const DisturbanceSpec& ds = sc_.disturbances[d];
        if (applied[d] || std::lround(ds.t / h) != i) continue;
        applied[d] = true;
        const Matrix3 R = body_to_world(state[ds.robot], nominal[ds.robot]);
        const Vector3 dv = disturbance_delta_v(ds.impulse, R, sc_.robots[ds.robot].params.mass);
        state[ds.robot] = apply_disturbance(state[ds.robot], dv);
        log.disturbances.push_back({ds.t, t, ds.robot, ds.impulse, dv});
      }
      if (i == steps) {
        if (plan) record(log, t, state, nominal, *plan, false);
        break;
      }
      replanned = i % replan_every == 0;
      if (replanned) {
        try {
          plan = &mpc_.update(t, state, nominal);
        } catch (const std::exception& e) {
          log.failure = FailureRecord{t, -1, std::string("planner: ") + e.what()};
          break;
        }
        log.solves.push_back({t, plan->solve_ms, plan->stats.iterations, !plan->degraded,
                              plan->cold_start, to_string(plan->stats.status)});
      }
      const int j = plan->step_at(t);
      for (std::size_t r = 0; r < state.size(); ++r) update_contacts(log, t, int(r), state[r], *plan, j);
      record(log, t, state, nominal, *plan, replanned);
      for (std::size_t r = 0; r < state.size(); ++r) {
        integrate(state[r], int(r), *plan, j, h);
        if (!state[r].finite() || !(state[r].r.z() > 0.0)) {
          log.failure = FailureRecord{t + h, int(r),
                                      state[r].finite() ? "base below ground" : "non-finite state"};
        }
        advance_nominal(nominal[r], int(r), t, h);
      }
      if (log.failure) break;
    }
    return log;
  }

 private:
  Matrix3 body_to_world(const SimRobotState& s, const NominalPose& nom) const {
    if (sc_.model == ModelKind::kSrbm) return quat::rotation(s.q);
    return quat::rotation(quat::from_yaw(nom.yaw));
  }

  void advance_nominal(NominalPose& nom, int robot, double t, double h) const {
    const CommandInput c = sc_.command_at(robot, t);
    nom.xy += h * (planar_rotation(nom.yaw) * c.v_xy);
    nom.yaw += h * c.yaw_rate;
  }

  static int leg_foothold(const MpcPlan& plan, int robot, int j, int leg) {
    return plan.ocp.schedules[robot].plan.steps[j][leg];
  }

  void update_contacts(SimLog& log, double t, int robot, SimRobotState& s, const MpcPlan& plan,
                       int j) const {
    for (int leg = 0; leg < kLegCount; ++leg) {
      const int idx = leg_foothold(plan, robot, j, leg);
      if (idx == kSwing) {
        s.contacts[leg].reset();
      } else if (!s.contacts[leg]) {
        Vector3 p = plan.ocp.foothold(plan.U, robot, idx);
        p.z() = 0.0;
        s.contacts[leg] = p;
        log.touchdowns.push_back({t, robot, leg, p});
      }
    }
  }

  void integrate(SimRobotState& s, int robot, const MpcPlan& plan, int j, double h) const {
    const LocomotionOcp& ocp = plan.ocp;
    const RobotParams& params = sc_.robots[robot].params;
    const int m_robot = sc_.model == ModelKind::kIpm ? IpmModel::kControlSize
                                                     : SrbmModel::kControlSize;
    const Vector u = plan.U.segment(ocp.dims.control_offset(j) + ocp.layouts[robot].control_offset,
                                    m_robot);
    std::vector<Vector3> feet, forces;
    std::vector<double> weights;
    for (int leg = 0; leg < kLegCount; ++leg) {
      if (!s.contacts[leg]) continue;
      feet.push_back(*s.contacts[leg]);
      if (sc_.model == ModelKind::kIpm) {
        weights.push_back(u[1 + leg]);
      } else {
        forces.push_back(u.segment<3>(3 * leg));
      }
    }
    if (sc_.model == ModelKind::kIpm) {
      if (!(s.r.z() > 0.0)) {
        s.r.z() = 0.0;
        return;
      }
      Vector3 a = params.gravity;
      if (!feet.empty()) a = ipm_accel(s.r, {u[0], weights}, feet, params.gravity);
      s.v += a * h;
      s.r += s.v * h;
      return;
    }
    const Vector3 a = srbm_translational_accel(forces, params);
    const Vector3 w_dot = srbm_angular_accel(s.r, s.q, s.omega_body, forces, feet, params);
    s.v += a * h;
    s.r += s.v * h;
    s.omega_body += w_dot * h;
    s.q = quat::normalized(quat::mul(s.q, quat::exp(s.omega_body * h)));
  }

  void record(SimLog& log, double t, const std::vector<SimRobotState>& state,
              const std::vector<NominalPose>& nominal, const MpcPlan& plan, bool replanned) const {
    const int j = plan.step_at(t);
    for (std::size_t r = 0; r < state.size(); ++r) {
      SimRecord rec;
      rec.t = t;
      rec.robot = static_cast<int>(r);
      rec.r = state[r].r;
      rec.v = state[r].v;
      rec.q = sc_.model == ModelKind::kSrbm ? state[r].q : quat::identity();
      const GaitSchedule& sched = plan.ocp.schedules[r];
      for (int leg = 0; leg < kLegCount; ++leg) {
        rec.contact[leg] = state[r].contacts[leg].has_value();
        if (rec.contact[leg]) {
          rec.foothold[leg] = state[r].contacts[leg];
          continue;
        }
        for (int i = 0; i < sched.foothold_count(); ++i) {
          if (sched.index_map[i].leg == leg && sched.index_map[i].k_start > j) {
            rec.foothold[leg] = plan.ocp.foothold(plan.U, static_cast<int>(r), i);
            break;
          }
        }
      }
      const CommandInput c = sc_.command_at(static_cast<int>(r), t);
      rec.ref = Vector3(nominal[r].xy.x(), nominal[r].xy.y(), c.target_height);
      rec.replan = replanned;
      rec.solve_ms = replanned ? plan.solve_ms : 0.0;
      rec.converged = !plan.degraded;
      log.records.push_back(rec);
    }
  }

  const Scenario& sc_;
  MpcController mpc_;
};

inline SimLog simulate(const Scenario& sc) { return Simulator(sc).run(); }

}  // namespace legmpc

#endif  // LEGMPC_SIM_SIMULATOR_HPP_
