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

#ifndef LEGMPC_VERIFY_RANDOM_INSTANCES_HPP_
#define LEGMPC_VERIFY_RANDOM_INSTANCES_HPP_

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>

#include "legmpc/locomotion/ocp_builder.hpp"
#include "legmpc/scenarios/terrain_costs.hpp"
#include "legmpc/verify/finite_difference.hpp"

namespace legmpc::verify {

/// A1-like parameters; tests and the oracle command use these when no robot
/// file is given.
inline RobotParams reference_robot() {
  RobotParams p;
  p.mass = 12.0;
  p.inertia_body = Vector3(0.017, 0.056, 0.065).asDiagonal();
  p.hip_offsets = {Vector3(0.183, 0.132, 0.0), Vector3(0.183, -0.132, 0.0),
                   Vector3(-0.183, 0.132, 0.0), Vector3(-0.183, -0.132, 0.0)};
  return p;
}

struct RandomInstance {
  LocomotionOcp ocp;
  Vector U;  ///< random point, away from the initial guess
};

namespace detail {

/// Lowest base height and largest per-step body turn of a rollout.
inline std::pair<double, double> rollout_extent(const LocomotionOcp& ocp, const Vector& U) {
  const ProblemDims& d = ocp.dims;
  const Vector X = rollout(*ocp.model, ocp.x0, U);
  double min_height = ocp.x0[2], max_turn = 0.0;
  for (int k = 1; k <= d.N; ++k) {
    const auto x = X.segment(d.state_offset(k), d.n);
    min_height = std::min(min_height, x[2]);
    if (ocp.kind == ModelKind::kSrbm) {
      const Vector4 dq = quat::mul(quat::conj(Vector4(x.segment<4>(10))), Vector4(x.segment<4>(6)));
      max_turn = std::max(max_turn, quat::log(dq).norm());
    }
  }
  return {min_height, max_turn};
}

}  // namespace detail

/**
 * A trot problem with perturbed state, references and decision vector. The
 * cost list includes every scenario term so oracles cover them as well.
 * Draws are repeated until the rollout keeps the base above 0.15 m and, for
 * the SRBM, turns by less than 0.5 rad per step.
 */
inline RandomInstance random_instance(ModelKind kind, std::uint64_t seed, int N = 20,
                                      double dt = 0.04) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  auto rv3 = [&](double s) { return Vector3(s * uni(rng), s * uni(rng), s * uni(rng)); };
  const RobotParams params = reference_robot();

  for (int attempt = 0;; ++attempt) {
    RobotSetup setup;
    setup.params = params;
    setup.schedule = build_gait_schedule(GaitSpec::trot(), 0.5 * (1.0 + uni(rng)), N, dt,
                                         kind == ModelKind::kIpm);
    CommandInput cmd;
    cmd.v_xy = Eigen::Vector2d(0.5 * uni(rng), 0.3 * uni(rng));
    cmd.yaw_rate = 0.5 * uni(rng);
    cmd.target_height = 0.3 + 0.05 * uni(rng);
    const Vector3 r0 = Vector3(0.1 * uni(rng), 0.1 * uni(rng), 0.3 + 0.03 * uni(rng));
    const double yaw0 = 0.3 * uni(rng);
    setup.plan = reference_base_trajectory(cmd, r0, yaw0, N, dt);
    setup.plan.s_ref = reference_footholds(setup.schedule, setup.plan, params.hip_offsets);
    const Vector3 v0 = rv3(0.3);
    if (kind == ModelKind::kIpm) {
      setup.x0 = ipm_state_vector(r0, v0, dt);
    } else {
      const Vector4 q = quat::from_yaw(yaw0) + 0.1 * Vector4(uni(rng), uni(rng), uni(rng), uni(rng));
      setup.x0 = srbm_state_vector(r0, v0, quat::normalized(q), rv3(0.5), dt);
    }

    RandomInstance inst{assemble_locomotion_ocp(kind, {setup}), {}};
    LocomotionOcp& ocp = inst.ocp;
    const ProblemDims& d = ocp.dims;
    inst.U = ocp.U_init;
    for (int k = 0; k < N; ++k) {
      auto u = inst.U.segment(d.control_offset(k), d.m);
      if (kind == ModelKind::kIpm) {
        u[0] += 0.5 * uni(rng);
        for (int i = 1; i < d.m; ++i) u[i] += 0.15 * uni(rng);
      } else {
        for (int i = 0; i < d.m; ++i) u[i] += 0.5 * uni(rng);
      }
    }
    // Foothold levers act on a light body, so SRBM footholds move less.
    const double s_jitter = kind == ModelKind::kIpm ? 0.05 : 0.005;
    for (int i = d.param_offset(); i < d.decision_size(); ++i) inst.U[i] += s_jitter * uni(rng);

    bool ok = false;
    try {
      const auto [min_height, max_turn] = detail::rollout_extent(ocp, inst.U);
      ok = min_height > 0.15 && max_turn < 0.5;
    } catch (const DivergedRolloutError&) {
      if (attempt >= 100) throw;
    }
    if (!ok && attempt < 100) continue;

    const FootholdBlock fb = ocp.footholds.front();
    const Vector3 s0 = inst.U.segment<3>(fb.u_offset);
    ocp.costs.push_back(std::make_shared<GapCost>(std::vector<GapSpec>{{s0.x() + 0.05, 0.16}},
                                                  ocp.footholds));
    StoneField field;
    for (int i = 0; i < fb.count; ++i) {
      field.stones.push_back(inst.U.segment<3>(fb.u_offset + 3 * i) + rv3(0.04));
    }
    ocp.costs.push_back(std::make_shared<SteppingStoneCost>(field, ocp.footholds));
    return inst;
  }
}

/// Two robots in one problem with the collision term active.
inline RandomInstance random_two_robot_instance(std::uint64_t seed, int N = 20, double dt = 0.04) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const RobotParams params = reference_robot();
  std::vector<RobotSetup> robots;
  for (int r = 0; r < 2; ++r) {
    RobotSetup s;
    s.params = params;
    s.schedule = build_gait_schedule(GaitSpec::trot(), 0.5 * r, N, dt, true);
    CommandInput cmd;
    cmd.v_xy = Eigen::Vector2d(r == 0 ? 0.5 : -0.5, 0.0);
    const Vector3 r0(r == 0 ? -0.4 : 0.4, 0.1 * uni(rng), 0.3);
    s.plan = reference_base_trajectory(cmd, r0, 0.0, N, dt);
    s.plan.s_ref = reference_footholds(s.schedule, s.plan, params.hip_offsets);
    s.x0 = ipm_state_vector(r0, Vector3(cmd.v_xy.x(), 0.0, 0.0), dt);
    robots.push_back(s);
  }
  RandomInstance inst{assemble_locomotion_ocp(ModelKind::kIpm, robots), {}};
  inst.U = inst.ocp.U_init;
  const ProblemDims& d = inst.ocp.dims;
  for (int i = 0; i < d.decision_size(); ++i) inst.U[i] += 0.05 * uni(rng);
  inst.ocp.costs.push_back(
      std::make_shared<CollisionCost>(inst.ocp.layouts[0], inst.ocp.layouts[1]));
  return inst;
}

struct OracleErrors {
  double sensitivity = 0.0;
  double gradient = 0.0;
  double step_jacobian = 0.0;
  double hessian_asymmetry = 0.0;
  double hessian_min_eigenvalue = 0.0;
};

/// Runs every finite-difference oracle on one instance.
inline OracleErrors check_instance(const RandomInstance& inst, double h = kDefaultStep) {
  const LocomotionOcp& ocp = inst.ocp;
  const DynamicsModel& model = *ocp.model;
  OracleErrors e;
  const Vector X = rollout(model, ocp.x0, inst.U);
  const SensitivityMatrix S = sensitivity(model, X, inst.U, ocp.x0);
  e.sensitivity = max_relative_error(S.S, fd_sensitivity(model, ocp.x0, inst.U, h));

  const Vector g = cost_gradient(ocp.costs, X, inst.U, S, ocp.x0);
  e.gradient = max_relative_error(g, fd_reduced_gradient(model, ocp.costs, ocp.x0, inst.U, h));

  const ProblemDims& d = ocp.dims;
  const Vector p = inst.U.tail(d.p);
  for (int k = 0; k < d.N; k += 5) {
    const Vector x = k == 0 ? ocp.x0 : Vector(X.segment(d.state_offset(k), d.n));
    const Vector u = inst.U.segment(d.control_offset(k), d.m);
    const auto& em = static_cast<const ExplicitDynamicsModel&>(model);
    Matrix Fx, Fu, Fp;
    em.linearize(k, x, u, p, Fx, Fu, Fp);
    const StepJacobianFd fd = fd_step_jacobians(model, k, x, u, p, h);
    e.step_jacobian = std::max({e.step_jacobian, max_relative_error(Fx, fd.Fx),
                                max_relative_error(Fu, fd.Fu), max_relative_error(Fp, fd.Fp)});
  }
  return e;
}

/// Symmetry and PSD checks on the least-squares part of a random instance.
inline OracleErrors check_hessian(const RandomInstance& inst) {
  const LocomotionOcp& ocp = inst.ocp;
  CostList ls(ocp.costs.begin(), ocp.costs.begin() + 2);  // tracking and model terms
  const Vector X = rollout(*ocp.model, ocp.x0, inst.U);
  const SensitivityMatrix S = sensitivity(*ocp.model, X, inst.U, ocp.x0);
  const Matrix H = gn_hessian(ls, X, inst.U, S, ocp.x0);
  OracleErrors e;
  e.hessian_asymmetry = (H - H.transpose()).cwiseAbs().maxCoeff();
  e.hessian_min_eigenvalue = Eigen::SelfAdjointEigenSolver<Matrix>(H).eigenvalues().minCoeff();
  return e;
}

}  // namespace legmpc::verify

#endif  // LEGMPC_VERIFY_RANDOM_INSTANCES_HPP_
