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

#ifndef LEGMPC_LOCOMOTION_OCP_BUILDER_HPP_
#define LEGMPC_LOCOMOTION_OCP_BUILDER_HPP_

#include <Eigen/LU>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "legmpc/core/solver.hpp"
#include "legmpc/locomotion/tracking_cost.hpp"
#include "legmpc/models/ipm.hpp"
#include "legmpc/models/model_costs.hpp"
#include "legmpc/models/srbm.hpp"

namespace legmpc {

enum class ModelKind { kIpm, kSrbm };

inline const char* to_string(ModelKind kind) { return kind == ModelKind::kIpm ? "ipm" : "srbm"; }

inline ModelKind parse_model_kind(const std::string& s) {
  if (s == "ipm") return ModelKind::kIpm;
  if (s == "srbm") return ModelKind::kSrbm;
  throw std::invalid_argument("unknown model '" + s + "' (expected ipm or srbm)");
}

inline int state_size(ModelKind kind) {
  return kind == ModelKind::kIpm ? IpmModel::kStateSize : SrbmModel::kStateSize;
}

/// [r, r - v dt]: the position pair encoding velocity v.
inline Vector ipm_state_vector(const Vector3& r, const Vector3& v, double dt) {
  Vector x(IpmModel::kStateSize);
  x << r, r - v * dt;
  return x;
}

/// [r, r - v dt, q, q * exp(-w dt)] with w the body angular velocity.
inline Vector srbm_state_vector(const Vector3& r, const Vector3& v, const Vector4& q,
                                const Vector3& omega_body, double dt) {
  Vector x(SrbmModel::kStateSize);
  x << r, r - v * dt, q, quat::normalized(quat::mul(q, quat::exp(-omega_body * dt)));
  return x;
}

struct RobotSetup {
  RobotParams params;
  GaitSchedule schedule;
  ReferencePlan plan;  ///< s_ref must be filled, one entry per foothold
  Vector x0;
  /// Measured contact positions of legs currently on the ground; footholds
  /// the robot already stands on are pinned to these.
  std::array<std::optional<Vector3>, kLegCount> contacts{};
  bool optimize_footholds = true;
};

struct FootholdBlock {
  int u_offset = 0;  ///< index in U of the first coordinate of foothold 0
  int count = 0;
};

/// Everything `solve` needs, plus the bookkeeping to read the plan back.
struct LocomotionOcp {
  ModelKind kind = ModelKind::kIpm;
  ProblemDims dims;
  std::shared_ptr<const ExplicitDynamicsModel> model;
  CostList costs;
  Vector x0;
  Vector U_init;
  std::vector<int> frozen;
  std::vector<RobotLayout> layouts;
  std::vector<FootholdBlock> footholds;
  std::vector<GaitSchedule> schedules;
  std::vector<ReferencePlan> plans;
  std::vector<RobotParams> robots;

  int robot_count() const { return static_cast<int>(layouts.size()); }

  Vector3 foothold(const Vector& U, int robot, int i) const {
    return U.segment<3>(footholds[robot].u_offset + 3 * i);
  }

  /// Base position r_k of a robot (k = 0 reads x0).
  Vector3 base_position(const Vector& X, int robot, int k) const {
    const int off = layouts[robot].state_offset;
    return k == 0 ? Vector3(x0.segment<3>(off)) : Vector3(X.segment<3>(dims.state_offset(k) + off));
  }

  SolveResult solve(const Vector& U_start, const SolverOptions& opts) const {
    return legmpc::solve(*model, costs, x0, U_start, opts, frozen);
  }
};

/**
 * Stance forces with zero torque about `r` whose total is closest to `net`,
 * with a weak pull toward an even split. Where the stance cannot realize
 * `net` (two feet, base off their line) the net force gives way.
 */
inline Vector balanced_forces(const std::vector<Vector3>& feet, const Vector3& r,
                              const Vector3& net) {
  const int n = static_cast<int>(feet.size());
  Matrix T(3, 3 * n), S(3, 3 * n);
  Vector even(3 * n);
  for (int i = 0; i < n; ++i) {
    T.block<3, 3>(0, 3 * i) = quat::skew(feet[i] - r);
    S.block<3, 3>(0, 3 * i) = Matrix3::Identity();
    even.segment<3>(3 * i) = net / n;
  }
  const Matrix Z = Eigen::FullPivLU<Matrix>(T).kernel();
  const double mu = 1e-6;
  const Matrix SZ = S * Z;
  const Matrix M = SZ.transpose() * SZ + mu * Z.transpose() * Z;
  return Z * M.ldlt().solve(SZ.transpose() * net + mu * Z.transpose() * even);
}

/**
 * Builds the stacked locomotion problem for one or more robots sharing the
 * horizon. U is laid out as [u_0 .. u_{N-1}, footholds of robot 0, ...];
 * scenario terms can be appended to `costs` afterwards.
 */
inline LocomotionOcp assemble_locomotion_ocp(ModelKind kind, const std::vector<RobotSetup>& robots,
                                             const CostWeights& w = {},
                                             SmoothPlusParams sp = {}) {
  if (robots.empty()) throw std::invalid_argument("assemble_locomotion_ocp: no robots");
  const int N = robots.front().schedule.N;
  const double dt = robots.front().schedule.dt;
  LocomotionOcp ocp;
  ocp.kind = kind;

  std::vector<std::shared_ptr<const ExplicitDynamicsModel>> parts;
  RobotLayout layout;
  for (const RobotSetup& r : robots) {
    if (r.schedule.N != N || r.schedule.dt != dt) {
      throw DimensionError("assemble_locomotion_ocp: mismatched horizon");
    }
    if (static_cast<int>(r.plan.r_ref.size()) != N + 1 ||
        static_cast<int>(r.plan.s_ref.size()) != r.schedule.foothold_count()) {
      throw DimensionError("assemble_locomotion_ocp: reference plan does not match schedule");
    }
    if (r.x0.size() != state_size(kind)) throw DimensionError("assemble_locomotion_ocp: bad x0");
    std::shared_ptr<const ExplicitDynamicsModel> part;
    if (kind == ModelKind::kIpm) {
      part = std::make_shared<IpmModel>(r.schedule.plan, dt, r.params.gravity);
    } else {
      part = std::make_shared<SrbmModel>(r.schedule.plan, dt, r.params);
    }
    ocp.layouts.push_back(layout);
    const ProblemDims d = part->dims();
    layout.state_offset += d.n;
    layout.control_offset += d.m;
    layout.param_offset += d.p;
    parts.push_back(std::move(part));
  }
  ocp.model = parts.size() == 1 ? parts.front() : std::make_shared<CompositeModel>(parts);
  ocp.dims = ocp.model->dims();
  const ProblemDims& d = ocp.dims;

  ocp.x0.resize(d.n);
  ocp.U_init = Vector::Zero(d.decision_size());
  for (std::size_t ri = 0; ri < robots.size(); ++ri) {
    const RobotSetup& r = robots[ri];
    const RobotLayout& lay = ocp.layouts[ri];
    const GaitSchedule& sched = r.schedule;
    ocp.x0.segment(lay.state_offset, r.x0.size()) = r.x0;
    ocp.footholds.push_back({d.param_offset() + lay.param_offset, sched.foothold_count()});

    const FootholdBlock& fb = ocp.footholds.back();
    for (int i = 0; i < sched.foothold_count(); ++i) {
      const FootholdSlot& slot = sched.index_map[i];
      Vector3 s = r.plan.s_ref[i];
      const bool pinned = slot.k_start == 0 && r.contacts[slot.leg].has_value();
      if (pinned) s = *r.contacts[slot.leg];
      ocp.U_init.segment<3>(fb.u_offset + 3 * i) = s;
      // Feet land on the ground, so a foothold's height stays at its reference.
      ocp.frozen.push_back(fb.u_offset + 3 * i + 2);
      if (pinned || !r.optimize_footholds) {
        for (int c = 0; c < 2; ++c) ocp.frozen.push_back(fb.u_offset + 3 * i + c);
      }
    }

    // SRBM guess: the base is pulled onto the reference by a critically
    // damped PD law and the forces realize that motion without torque.
    constexpr double kPullRate = 10.0;  // 1/s
    Vector3 p_base = r.x0.segment<3>(0);
    Vector3 v_base = (r.x0.segment<3>(0) - r.x0.segment<3>(3)) / dt;
    for (int k = 0; k < N; ++k) {
      const int base = d.control_offset(k) + lay.control_offset;
      const int stance = sched.plan.stance_count(k);
      for (int leg = 0; leg < kLegCount; ++leg) {
        const bool on = sched.plan.in_stance(k, leg);
        if (kind == ModelKind::kIpm) {
          if (on) {
            ocp.U_init[base + 1 + leg] = 1.0 / stance;
          } else {
            ocp.frozen.push_back(base + 1 + leg);
          }
        } else if (!on) {
          for (int c = 0; c < 3; ++c) ocp.frozen.push_back(base + 3 * leg + c);
        }
      }
      if (kind != ModelKind::kSrbm) continue;
      Vector3 f_sum = Vector3::Zero();
      if (stance > 0) {
        std::vector<Vector3> feet;
        for (int leg = 0; leg < kLegCount; ++leg) {
          if (sched.plan.in_stance(k, leg)) {
            feet.push_back(ocp.U_init.segment<3>(fb.u_offset + 3 * sched.plan.steps[k][leg]));
          }
        }
        const Vector3 v_ref = (r.plan.r_ref[k + 1] - r.plan.r_ref[k]) / dt;
        const Vector3 a = kPullRate * kPullRate * (r.plan.r_ref[k] - p_base) +
                          2.0 * kPullRate * (v_ref - v_base);
        const Vector f = balanced_forces(feet, p_base, r.params.mass * (a - r.params.gravity));
        for (int i = 0; i < f.size() / 3; ++i) f_sum += f.segment<3>(3 * i);
        int j = 0;
        for (int leg = 0; leg < kLegCount; ++leg) {
          if (sched.plan.in_stance(k, leg)) ocp.U_init.segment<3>(base + 3 * leg) = f.segment<3>(3 * j++);
        }
      }
      // Same Verlet update as the model, with the realized net force.
      v_base += (f_sum / r.params.mass + r.params.gravity) * dt;
      p_base += v_base * dt;
    }

    ocp.costs.push_back(std::make_shared<TrackingCost>(r.plan, lay, w.K1, w.K2, w.K3));
    if (kind == ModelKind::kIpm) {
      ocp.costs.push_back(std::make_shared<IpmModelCost>(sched.plan, lay, w.K4, w.K5, sp));
    } else {
      ocp.costs.push_back(std::make_shared<SrbmModelCost>(sched.plan, lay, r.plan.q_ref, w.K6,
                                                          w.K7, sp));
    }
    ocp.schedules.push_back(sched);
    ocp.plans.push_back(r.plan);
    ocp.robots.push_back(r.params);
  }
  std::sort(ocp.frozen.begin(), ocp.frozen.end());
  ocp.frozen.erase(std::unique(ocp.frozen.begin(), ocp.frozen.end()), ocp.frozen.end());
  return ocp;
}

}  // namespace legmpc

#endif  // LEGMPC_LOCOMOTION_OCP_BUILDER_HPP_
