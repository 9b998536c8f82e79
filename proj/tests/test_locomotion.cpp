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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "legmpc/locomotion/ocp_builder.hpp"
#include "legmpc/verify/random_instances.hpp"

namespace legmpc {
namespace {

constexpr int kN = 20;
constexpr double kDt = 0.04;

TEST(GaitSchedule, TrotFromPhaseZero) {
  const GaitSchedule s = build_gait_schedule(GaitSpec::trot(), 0.0, kN, kDt, true);
  EXPECT_EQ(s.foothold_count(), 8);
  for (int k = 0; k < kN; ++k) {
    ASSERT_EQ(s.stance_sets[k].size(), 2u) << k;
    const bool first_pair = (k / 5) % 2 == 0;
    EXPECT_EQ(s.contact[k][0], first_pair);
    EXPECT_EQ(s.contact[k][3], first_pair);
    EXPECT_EQ(s.contact[k][1], !first_pair);
    EXPECT_EQ(s.contact[k][2], !first_pair);
  }
  // Touchdown order with ties broken by leg order.
  const int legs[] = {0, 3, 1, 2, 0, 3, 1, 2};
  const int starts[] = {0, 0, 5, 5, 10, 10, 15, 15};
  for (int i = 0; i < 8; ++i) {
    EXPECT_EQ(s.index_map[i].leg, legs[i]);
    EXPECT_EQ(s.index_map[i].k_start, starts[i]);
    EXPECT_EQ(s.index_map[i].k_end, starts[i] + 4);
  }
  // FL touches down exactly at t = 0.
  EXPECT_FALSE(s.index_map[0].ongoing);
}

TEST(GaitSchedule, StandHasAllFeetEverywhere) {
  const GaitSchedule s = build_gait_schedule(GaitSpec::stand(), 0.3, kN, kDt, true);
  EXPECT_EQ(s.foothold_count(), 4);
  for (int k = 0; k < kN; ++k) EXPECT_EQ(s.stance_sets[k], (std::vector<int>{0, 1, 2, 3}));
}

TEST(GaitSchedule, FlightPhaseRejectedForIpm) {
  EXPECT_THROW(build_gait_schedule(GaitSpec::trot(0.4, 0.4), 0.0, kN, kDt, true),
               InfeasibleGaitError);
  EXPECT_NO_THROW(build_gait_schedule(GaitSpec::trot(0.4, 0.4), 0.0, kN, kDt, false));
}

TEST(GaitSchedule, InvariantsAcrossPhases) {
  for (double phase = 0.0; phase < 1.0; phase += 0.037) {
    const GaitSchedule s = build_gait_schedule(GaitSpec::trot(), phase, kN, kDt, true);
    std::vector<int> seen(s.foothold_count(), 0);
    for (int k = 0; k < kN; ++k) {
      EXPECT_FALSE(s.stance_sets[k].empty());
      for (int i : s.stance_sets[k]) ++seen[i];
    }
    for (int i = 0; i < s.foothold_count(); ++i) {
      const FootholdSlot& slot = s.index_map[i];
      EXPECT_EQ(seen[i], slot.k_end - slot.k_start + 1);  // contiguous interval
      for (int k = slot.k_start; k <= slot.k_end; ++k) EXPECT_EQ(s.foothold_at(k, slot.leg), i);
      if (i > 0) {
        EXPECT_LE(s.index_map[i - 1].k_start, slot.k_start);
      }
    }
  }
}

TEST(GaitSchedule, Deterministic) {
  const GaitSchedule a = build_gait_schedule(GaitSpec::walk(), 0.61, kN, kDt);
  const GaitSchedule b = build_gait_schedule(GaitSpec::walk(), 0.61, kN, kDt);
  EXPECT_EQ(a.contact, b.contact);
  EXPECT_EQ(a.stance_sets, b.stance_sets);
  EXPECT_EQ(a.index_map, b.index_map);
  EXPECT_EQ(a.plan.steps, b.plan.steps);
}

TEST(GaitSchedule, BadArguments) {
  EXPECT_THROW(build_gait_schedule(GaitSpec::trot(), 0.0, 0, kDt), std::invalid_argument);
  EXPECT_THROW(build_gait_schedule(GaitSpec::trot(0.0), 0.0, kN, kDt), std::invalid_argument);
  EXPECT_THROW(build_gait_schedule(GaitSpec::trot(0.4, 1.5), 0.0, kN, kDt), std::invalid_argument);
}

TEST(ReferenceBase, ZeroCommandIsConstant) {
  CommandInput c;
  c.target_height = 0.28;
  const ReferencePlan p = reference_base_trajectory(c, Vector3(0.4, -0.1, 0.31), 0.2, kN, kDt);
  ASSERT_EQ(p.r_ref.size(), std::size_t(kN + 1));
  for (int k = 0; k <= kN; ++k) {
    EXPECT_EQ(p.r_ref[k], Vector3(0.4, -0.1, 0.28));
    EXPECT_EQ(p.h_ref[k], 0.28);
    EXPECT_EQ(p.q_ref[k], quat::from_yaw(0.2));
  }
}

TEST(ReferenceBase, ForwardVelocityIntegrates) {
  CommandInput c;
  c.v_xy = Eigen::Vector2d(0.5, 0.0);
  const ReferencePlan p = reference_base_trajectory(c, Vector3::Zero(), 0.0, kN, kDt);
  for (int k = 0; k < kN; ++k) EXPECT_NEAR(p.r_ref[k + 1].x() - p.r_ref[k].x(), 0.02, 1e-15);
}

TEST(ReferenceBase, YawRateEndpoint) {
  CommandInput c;
  c.yaw_rate = std::numbers::pi / 2;
  const ReferencePlan p = reference_base_trajectory(c, Vector3::Zero(), 0.0, 25, kDt);
  const Vector4 q90(std::cos(std::numbers::pi / 4), 0, 0, std::sin(std::numbers::pi / 4));
  EXPECT_LT((p.q_ref.back() - q90).norm(), 1e-12);
  for (const Vector4& q : p.q_ref) EXPECT_NEAR(q.norm(), 1.0, 1e-15);
}

TEST(ReferenceBase, VelocityRotatesWithHeading) {
  CommandInput c;
  c.v_xy = Eigen::Vector2d(1.0, 0.0);
  const ReferencePlan p = reference_base_trajectory(c, Vector3::Zero(), std::numbers::pi / 2, 1, 0.1);
  EXPECT_NEAR(p.r_ref[1].x(), 0.0, 1e-15);
  EXPECT_NEAR(p.r_ref[1].y(), 0.1, 1e-15);
}

TEST(ReferenceBase, HoldGainPullsTowardAnchor) {
  CommandInput c;
  c.hold_gain = 2.0;
  const ReferencePlan p = reference_base_trajectory(c, Vector3(0.1, 0, 0.3), 0.0, kN, kDt);
  for (int k = 0; k < kN; ++k) {
    EXPECT_NEAR(p.r_ref[k + 1].x(), p.r_ref[k].x() * (1.0 - 2.0 * kDt), 1e-15);
  }
}

const RobotParams kRobot = verify::reference_robot();

TEST(ReferenceFootholds, BelowHipsAtRest) {
  const GaitSchedule s = build_gait_schedule(GaitSpec::trot(), 0.0, kN, kDt, true);
  const ReferencePlan b = reference_base_trajectory({}, Vector3(1.0, 2.0, 0.3), 0.0, kN, kDt);
  const auto ref = reference_footholds(s, b, kRobot.hip_offsets);
  ASSERT_EQ(ref.size(), 8u);
  for (int i = 0; i < 8; ++i) {
    const Vector3 hip = Vector3(1.0, 2.0, 0.0) + kRobot.hip_offsets[s.index_map[i].leg];
    EXPECT_LT((ref[i] - hip).norm(), 1e-15);
  }
}

TEST(ReferenceFootholds, ForwardWalkSpacing) {
  const GaitSchedule s = build_gait_schedule(GaitSpec::trot(), 0.0, 30, kDt, true);
  CommandInput c;
  c.v_xy = Eigen::Vector2d(0.5, 0.0);
  const ReferencePlan b = reference_base_trajectory(c, Vector3(0, 0, 0.3), 0.0, 30, kDt);
  const auto ref = reference_footholds(s, b, kRobot.hip_offsets);
  // Unclipped same-leg stances: FR at steps 5-9, 15-19, 25-29.
  std::vector<double> fr;
  for (int i = 0; i < s.foothold_count(); ++i) {
    if (s.index_map[i].leg == 1) fr.push_back(ref[i].x());
  }
  ASSERT_EQ(fr.size(), 3u);
  EXPECT_NEAR(fr[1] - fr[0], 0.2, 1e-12);
  EXPECT_NEAR(fr[2] - fr[1], 0.2, 1e-12);
}

TEST(ReferenceFootholds, ClippedIntervalUsesClippedMidpoint) {
  // Phase 0.2: FL is in stance for the first 3 steps only (clipped at 0).
  const GaitSchedule s = build_gait_schedule(GaitSpec::trot(), 0.2, kN, kDt, true);
  CommandInput c;
  c.v_xy = Eigen::Vector2d(0.5, 0.0);
  const ReferencePlan b = reference_base_trajectory(c, Vector3(0, 0, 0.3), 0.0, kN, kDt);
  const auto ref = reference_footholds(s, b, kRobot.hip_offsets);
  const FootholdSlot& first = s.index_map[0];
  ASSERT_EQ(first.k_start, 0);
  EXPECT_TRUE(first.ongoing);
  const double mid = 0.5 * (first.k_end + 1) * kDt;
  EXPECT_NEAR(ref[0].x(), kRobot.hip_offsets[first.leg].x() + 0.5 * mid, 1e-12);
}

RobotSetup setup_for(ModelKind kind, const GaitSpec& gait, const CommandInput& cmd,
                     const Vector3& r0 = Vector3(0, 0, 0.3)) {
  RobotSetup s;
  s.params = kRobot;
  s.schedule = build_gait_schedule(gait, 0.0, kN, kDt, kind == ModelKind::kIpm);
  s.plan = reference_base_trajectory(cmd, r0, 0.0, kN, kDt);
  s.plan.s_ref = reference_footholds(s.schedule, s.plan, kRobot.hip_offsets);
  s.x0 = kind == ModelKind::kIpm
             ? ipm_state_vector(r0, Vector3::Zero(), kDt)
             : srbm_state_vector(r0, Vector3::Zero(), quat::identity(), Vector3::Zero(), kDt);
  return s;
}

double tracking_value(const LocomotionOcp& ocp, const Vector& X, const Vector& U) {
  return ocp.costs[0]->value({ocp.dims, ocp.x0, X, U});
}

TEST(TrackingCost, ZeroOnReference) {
  CommandInput c;
  c.v_xy = Eigen::Vector2d(0.3, 0.1);
  const LocomotionOcp ocp = assemble_locomotion_ocp(ModelKind::kIpm, {setup_for(ModelKind::kIpm, GaitSpec::trot(), c)});
  const ProblemDims& d = ocp.dims;
  Vector X(d.state_size());
  for (int k = 1; k <= kN; ++k) {
    X.segment(d.state_offset(k), 6) << ocp.plans[0].r_ref[k], ocp.plans[0].r_ref[k - 1];
  }
  EXPECT_EQ(tracking_value(ocp, X, ocp.U_init), 0.0);
}

TEST(TrackingCost, FootholdTranslationInvariance) {
  const auto inst = verify::random_instance(ModelKind::kIpm, 41);
  const LocomotionOcp& ocp = inst.ocp;
  const Vector X = rollout(*ocp.model, ocp.x0, inst.U);
  Vector U = inst.U;
  for (int i = 0; i < ocp.footholds[0].count; ++i) {
    U.segment<3>(ocp.footholds[0].u_offset + 3 * i) += Vector3(0.37, -1.2, 0.05);
  }
  EXPECT_NEAR(tracking_value(ocp, X, U), tracking_value(ocp, X, inst.U), 1e-12);
}

TEST(TrackingCost, SingleVelocityOffset) {
  const LocomotionOcp ocp = assemble_locomotion_ocp(ModelKind::kIpm, {setup_for(ModelKind::kIpm, GaitSpec::trot(), {})});
  const ProblemDims& d = ocp.dims;
  Vector X(d.state_size());
  for (int k = 1; k <= kN; ++k) X.segment(d.state_offset(k), 6) << 0, 0, 0.3, 0, 0, 0.3;
  // The base steps 0.01 m sideways between k = 2 and k = 3 and stays there:
  // only r_3 - r_2 deviates from the reference.
  for (int k = 3; k <= kN; ++k) X[d.state_offset(k) + 1] = 0.01;
  for (int k = 4; k <= kN; ++k) X[d.state_offset(k) + 4] = 0.01;
  EXPECT_NEAR(tracking_value(ocp, X, ocp.U_init), 1.0 * 1e-4, 1e-15);
}

TEST(TrackingCost, PartialsMatchFiniteDifferences) {
  for (ModelKind kind : {ModelKind::kIpm, ModelKind::kSrbm}) {
    const auto inst = verify::random_instance(kind, 43);
    const LocomotionOcp& ocp = inst.ocp;
    const CostList term = {ocp.costs[0]};
    const Vector X = rollout(*ocp.model, ocp.x0, inst.U);
    const CostDerivatives der = evaluate_cost_derivatives(term, {ocp.dims, ocp.x0, X, inst.U});
    const auto [gx, gu] = verify::fd_cost_partials(term, ocp.dims, ocp.x0, X, inst.U);
    EXPECT_LT(verify::max_relative_error(der.dX, gx), 1e-7);
    EXPECT_LT(verify::max_relative_error(der.dU, gu), 1e-7);
  }
}

TEST(Assemble, LayoutAndInitialGuess) {
  const LocomotionOcp ipm = assemble_locomotion_ocp(ModelKind::kIpm, {setup_for(ModelKind::kIpm, GaitSpec::trot(), {})});
  EXPECT_EQ(ipm.dims.n, 6);
  EXPECT_EQ(ipm.dims.m, 5);
  EXPECT_EQ(ipm.dims.p, 24);
  EXPECT_EQ(ipm.footholds[0].u_offset, kN * 5);
  for (int k = 0; k < kN; ++k) {
    const auto u = ipm.U_init.segment(ipm.dims.control_offset(k), 5);
    EXPECT_EQ(u[0], 0.0);
    for (int leg = 0; leg < kLegCount; ++leg) {
      EXPECT_EQ(u[1 + leg], ipm.schedules[0].contact[k][leg] ? 0.5 : 0.0);
    }
  }
  for (int i = 0; i < 8; ++i) EXPECT_EQ(ipm.foothold(ipm.U_init, 0, i), ipm.plans[0].s_ref[i]);

  const LocomotionOcp srbm = assemble_locomotion_ocp(ModelKind::kSrbm, {setup_for(ModelKind::kSrbm, GaitSpec::trot(), {})});
  EXPECT_EQ(srbm.dims.n, 14);
  EXPECT_EQ(srbm.dims.m, 12);
  EXPECT_EQ(srbm.dims.p, 24);
  const auto u0 = srbm.U_init.segment(0, 12);
  EXPECT_NEAR(u0[2], 12.0 * 9.81 / 2, 1e-12);
  EXPECT_EQ(u0[5], 0.0);
  // Same schedule and plan for both model kinds.
  EXPECT_EQ(ipm.schedules[0].plan.steps, srbm.schedules[0].plan.steps);
  EXPECT_EQ(ipm.plans[0].s_ref, srbm.plans[0].s_ref);
}

double initial_gradient_norm(const LocomotionOcp& ocp) {
  const Vector X = rollout(*ocp.model, ocp.x0, ocp.U_init);
  const SensitivityMatrix S = sensitivity(*ocp.model, X, ocp.U_init, ocp.x0);
  Vector g = cost_gradient(ocp.costs, X, ocp.U_init, S, ocp.x0);
  for (int i : ocp.frozen) g[i] = 0.0;
  return g.lpNorm<Eigen::Infinity>();
}

TEST(Assemble, ZeroCommandInitialCostIsSoftConstraintResidue) {
  const LocomotionOcp ocp = assemble_locomotion_ocp(ModelKind::kIpm, {setup_for(ModelKind::kIpm, GaitSpec::stand(), {})});
  const Vector X = rollout(*ocp.model, ocp.x0, ocp.U_init);
  EXPECT_EQ(tracking_value(ocp, X, ocp.U_init), 0.0);
  // Weights of 0.25 are above eps, so the residue is exactly zero here.
  EXPECT_EQ(total_cost(ocp.costs, {ocp.dims, ocp.x0, X, ocp.U_init}), 0.0);
}

TEST(Assemble, StandHoverIsStationary) {
  const LocomotionOcp ipm = assemble_locomotion_ocp(ModelKind::kIpm, {setup_for(ModelKind::kIpm, GaitSpec::stand(), {})});
  EXPECT_LT(initial_gradient_norm(ipm), 1e-6);
  const SolveResult r = ipm.solve(ipm.U_init, {});
  EXPECT_LE(r.stats.iterations, 1);
  EXPECT_TRUE(r.stats.converged);
  const LocomotionOcp trot = assemble_locomotion_ocp(ModelKind::kIpm, {setup_for(ModelKind::kIpm, GaitSpec::trot(), {})});
  EXPECT_LT(initial_gradient_norm(trot), 1e-6);
}

TEST(Assemble, FrozenEntries) {
  RobotSetup s = setup_for(ModelKind::kIpm, GaitSpec::trot(), {});
  s.contacts[0] = Vector3(0.19, 0.14, 0.0);
  const LocomotionOcp ocp = assemble_locomotion_ocp(ModelKind::kIpm, {s});
  const int fl = ocp.footholds[0].u_offset;  // foothold 0 is FL, in stance at step 0
  EXPECT_EQ(ocp.foothold(ocp.U_init, 0, 0), Vector3(0.19, 0.14, 0.0));
  auto frozen = [&](int i) {
    return std::find(ocp.frozen.begin(), ocp.frozen.end(), i) != ocp.frozen.end();
  };
  EXPECT_TRUE(frozen(fl) && frozen(fl + 1) && frozen(fl + 2));
  EXPECT_FALSE(frozen(fl + 3));  // RR has no measured contact
  EXPECT_TRUE(frozen(1 + 1));    // FR weight at step 0, swing
  EXPECT_FALSE(frozen(1 + 0));

  s.optimize_footholds = false;
  const LocomotionOcp fixed = assemble_locomotion_ocp(ModelKind::kIpm, {s});
  for (int i = 0; i < fixed.dims.p; ++i) EXPECT_TRUE(std::count(fixed.frozen.begin(), fixed.frozen.end(), fl + i));
}

TEST(Assemble, MismatchedHorizonThrows) {
  RobotSetup a = setup_for(ModelKind::kIpm, GaitSpec::trot(), {});
  RobotSetup b = a;
  b.schedule = build_gait_schedule(GaitSpec::trot(), 0.0, kN + 1, kDt, true);
  EXPECT_THROW(assemble_locomotion_ocp(ModelKind::kIpm, {a, b}), DimensionError);
  RobotSetup c = a;
  c.plan.s_ref.pop_back();
  EXPECT_THROW(assemble_locomotion_ocp(ModelKind::kIpm, {c}), DimensionError);
}

TEST(Solve, TrotInPlaceStaysNearNominal) {
  for (ModelKind kind : {ModelKind::kIpm, ModelKind::kSrbm}) {
    RobotSetup s = setup_for(kind, GaitSpec::trot(), {});
    const LocomotionOcp ocp = assemble_locomotion_ocp(kind, {s});
    const SolveResult r = ocp.solve(ocp.U_init, {});
    for (int k = 0; k <= kN; ++k) {
      EXPECT_LT((ocp.base_position(r.X, 0, k) - Vector3(0, 0, 0.3)).norm(), 0.05) << to_string(kind);
    }
  }
}

}  // namespace
}  // namespace legmpc
