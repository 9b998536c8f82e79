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
#include <random>

#include "legmpc/models/model_costs.hpp"
#include "legmpc/models/srbm.hpp"
#include "legmpc/verify/random_instances.hpp"

namespace legmpc {
namespace {

constexpr double kEps = 0.1;

TEST(SmoothPlus, BranchValues) {
  EXPECT_EQ(smooth_plus(1.0), 0.0);
  EXPECT_NEAR(smooth_plus(-1.0), 1.0 + 0.01 / 3.0, 1e-15);
  EXPECT_NEAR(smooth_plus(0.0), kEps * kEps / 6.0, 1e-15);
  EXPECT_NEAR(smooth_plus(0.3, {0.5, kEps}), smooth_plus(-0.2), 1e-15);
}

TEST(SmoothPlus, C2AtBranchPoints) {
  for (double g : {-kEps, kEps}) {
    // Left and right limits of each quantity, compared at distance 1e-12.
    const double a = 1e-12;
    const SmoothPlusValue lo = smooth_plus_eval(g - a), hi = smooth_plus_eval(g + a);
    EXPECT_NEAR(lo.value, hi.value, 1e-10);
    EXPECT_NEAR(lo.d1, hi.d1, 1e-10);
    EXPECT_NEAR(lo.d2, hi.d2, 1e-10);
  }
}

TEST(SmoothPlus, NonNegativeAndZeroExactlyAboveEps) {
  for (double x = -2.0; x <= 2.0; x += 0.001) {
    const double s = smooth_plus(x);
    EXPECT_GE(s, 0.0);
    EXPECT_EQ(s == 0.0, x >= kEps) << x;
  }
}

TEST(SmoothPlus, DerivativesMatchFiniteDifferences) {
  const double h = 1e-6;
  for (double x : {-0.5, -0.1 + 1e-3, -0.05, 0.0, 0.04, 0.0999, 0.3}) {
    EXPECT_NEAR(smooth_plus_d1(x), (smooth_plus(x + h) - smooth_plus(x - h)) / (2 * h), 1e-8);
    EXPECT_NEAR(smooth_plus_d2(x), (smooth_plus_d1(x + h) - smooth_plus_d1(x - h)) / (2 * h),
                1e-6);
  }
}

const std::vector<Vector3> kSquare = {Vector3(0.2, 0.15, 0.0), Vector3(0.2, -0.15, 0.0),
                                      Vector3(-0.2, 0.15, 0.0), Vector3(-0.2, -0.15, 0.0)};

TEST(Cop, ConvexCombinations) {
  EXPECT_LT(cop(std::vector<double>{0.25, 0.25, 0.25, 0.25}, kSquare).norm(), 1e-15);
  EXPECT_EQ(cop(std::vector<double>{1.0, 0.0, 0.0, 0.0}, kSquare), kSquare[0]);
  EXPECT_EQ(cop(std::vector<double>{0.5, 0.5, 0.0, 0.0}, kSquare), Vector3(0.2, 0.0, 0.0));
}

TEST(Cop, StaysInHullForSimplexWeights) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const std::vector<Vector3> tri = {Vector3(0.0, 0.0, 0.0), Vector3(1.0, 0.0, 0.0),
                                    Vector3(0.0, 1.0, 0.0)};
  for (int i = 0; i < 200; ++i) {
    std::vector<double> w = {uni(rng), uni(rng), uni(rng)};
    const double sum = w[0] + w[1] + w[2];
    for (double& x : w) x /= sum;
    const Vector3 c = cop(w, tri);
    // Barycentric test for the unit right triangle.
    EXPECT_GE(c.x(), -1e-15);
    EXPECT_GE(c.y(), -1e-15);
    EXPECT_LE(c.x() + c.y(), 1.0 + 1e-15);
  }
}

TEST(Cop, Errors) {
  EXPECT_THROW(cop(std::vector<double>{}, std::vector<Vector3>{}), std::invalid_argument);
  EXPECT_THROW(cop(std::vector<double>{1.0}, kSquare), DimensionError);
}

IpmControl single_foot(double h_ddot) { return {h_ddot, {1.0}}; }
const std::vector<Vector3> kOrigin = {Vector3::Zero()};

TEST(IpmAccel, Examples) {
  EXPECT_EQ(ipm_accel(Vector3(0, 0, 0.5), single_foot(0.0), kOrigin), Vector3::Zero());
  const Vector3 a = ipm_accel(Vector3(0.1, 0, 0.5), single_foot(0.0), kOrigin);
  EXPECT_NEAR(a.x(), 1.962, 1e-12);
  EXPECT_EQ(a.y(), 0.0);
  EXPECT_NEAR(a.z(), 0.0, 1e-15);
  const Vector3 b = ipm_accel(Vector3(0, 0, 0.5), single_foot(1.0), kOrigin);
  EXPECT_NEAR((b - Vector3(0, 0, 1)).norm(), 0.0, 1e-15);
}

TEST(IpmAccel, ZeroOnlyAboveCopWithoutHeightCommand) {
  EXPECT_NE(ipm_accel(Vector3(0.001, 0, 0.5), single_foot(0.0), kOrigin).norm(), 0.0);
  EXPECT_NE(ipm_accel(Vector3(0, 0, 0.5), single_foot(0.1), kOrigin).norm(), 0.0);
}

TEST(IpmAccel, NonPositiveHeightThrows) {
  EXPECT_THROW(ipm_accel(Vector3(0, 0, 0.0), single_foot(0.0), kOrigin), SingularPendulumError);
  EXPECT_THROW(ipm_accel(Vector3(0, 0, -0.1), single_foot(0.0), kOrigin), SingularPendulumError);
}

TEST(IpmStep, FixedPointAndVerlet) {
  const IpmState eq{Vector3(0, 0, 0.5), Vector3(0, 0, 0.5)};
  const IpmState same = ipm_step(eq, single_foot(0.0), kOrigin, 0.04);
  EXPECT_EQ(same.r, eq.r);
  EXPECT_EQ(same.r_prev, eq.r);
  // CoP directly below r_k: pure Verlet extrapolation.
  const IpmState moving{Vector3(0, 0, 0.5), Vector3(-0.01, 0, 0.5)};
  const IpmState next = ipm_step(moving, single_foot(0.0), kOrigin, 0.04);
  EXPECT_NEAR((next.r - Vector3(0.01, 0, 0.5)).norm(), 0.0, 1e-15);
  EXPECT_EQ(next.r_prev, moving.r);
}

template <class Model>
double worst_step_jacobian_error(ModelKind kind, int trials) {
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto inst = verify::random_instance(kind, 5000 + t);
    const auto& model = static_cast<const Model&>(*inst.ocp.model);
    const ProblemDims& d = inst.ocp.dims;
    const Vector X = rollout(model, inst.ocp.x0, inst.U);
    const Vector p = inst.U.tail(d.p);
    const int k = t % d.N;
    const Vector x = k == 0 ? inst.ocp.x0 : Vector(X.segment(d.state_offset(k), d.n));
    const Vector u = inst.U.segment(d.control_offset(k), d.m);
    Matrix Fx, Fu, Fp;
    model.linearize(k, x, u, p, Fx, Fu, Fp);
    const verify::StepJacobianFd fd = verify::fd_step_jacobians(model, k, x, u, p, 1e-6);
    worst = std::max({worst, verify::max_relative_error(Fx, fd.Fx),
                      verify::max_relative_error(Fu, fd.Fu), verify::max_relative_error(Fp, fd.Fp)});
  }
  return worst;
}

TEST(IpmModel, StepJacobiansMatchFiniteDifferences) {
  EXPECT_LT(worst_step_jacobian_error<IpmModel>(ModelKind::kIpm, 100), 1e-6);
}

TEST(IpmModel, SwingWeightsDoNotEnterDynamics) {
  const auto inst = verify::random_instance(ModelKind::kIpm, 17);
  const auto& model = static_cast<const IpmModel&>(*inst.ocp.model);
  const ProblemDims& d = inst.ocp.dims;
  for (int k = 0; k < d.N; ++k) {
    for (int leg = 0; leg < kLegCount; ++leg) {
      if (model.plan().in_stance(k, leg)) continue;
      Vector U = inst.U;
      U[d.control_offset(k) + 1 + leg] += 3.0;
      EXPECT_EQ(rollout(model, inst.ocp.x0, U), rollout(model, inst.ocp.x0, inst.U));
    }
  }
}

ContactPlan one_step_plan(std::array<int, kLegCount> legs, int footholds) {
  ContactPlan p;
  p.foothold_count = footholds;
  p.steps = {legs};
  return p;
}

double ipm_cost_single_step(double w0, double w1) {
  const ContactPlan plan = one_step_plan({0, 1, kSwing, kSwing}, 2);
  const IpmModelCost cost(plan, {});
  const ProblemDims d{6, 5, 6, 1, 0.04};
  Vector U = Vector::Zero(d.decision_size());
  U[1] = w0;
  U[2] = w1;
  U[3] = 7.0;  // swing weight, ignored
  const Vector x0 = Vector::Zero(6), X = Vector::Zero(6);
  return cost.value({d, x0, X, U});
}

TEST(IpmModelCost, Examples) {
  EXPECT_EQ(ipm_cost_single_step(0.5, 0.5), 0.0);
  EXPECT_NEAR(ipm_cost_single_step(0.0, 0.0), 50.0 + 2.0 * kEps * kEps / 6.0, 1e-12);
  // Valid simplex point with one sub-eps weight: only S of that weight remains.
  EXPECT_NEAR(ipm_cost_single_step(0.95, 0.05), smooth_plus(0.05), 1e-12);
}

TEST(QuatExp, Examples) {
  EXPECT_EQ(quat::exp(Vector3::Zero()), quat::identity());
  const Vector4 q = quat::exp(Vector3(std::numbers::pi, 0, 0));
  EXPECT_NEAR((q - Vector4(0, 1, 0, 0)).norm(), 0.0, 1e-15);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    EXPECT_NEAR(quat::exp(Vector3(n(rng), n(rng), n(rng))).norm(), 1.0, 1e-15);
  }
  EXPECT_NEAR(quat::exp(Vector3(1e-10, 0, 0))[1], 5e-11, 1e-24);
}

TEST(QuatExp, JacobianMatchesFiniteDifferences) {
  const double h = 1e-7;
  for (const Vector3& v : {Vector3(0.3, -0.2, 0.5), Vector3(1e-3, 2e-3, 0.0), Vector3::Zero().eval()}) {
    const Eigen::Matrix<double, 4, 3> J = quat::exp_jacobian(v);
    for (int j = 0; j < 3; ++j) {
      Vector3 e = Vector3::Zero();
      e[j] = h;
      const Vector4 fd = (quat::exp(v + e) - quat::exp(v - e)) / (2 * h);
      EXPECT_LT((J.col(j) - fd).norm(), 1e-8);
    }
  }
}

TEST(QuatLog, InvertsExp) {
  for (const Vector3& v : {Vector3(0.3, -0.2, 0.5), Vector3(1e-5, 0, -2e-5), Vector3(2.5, 1.0, 0.0),
                           Vector3::Zero().eval()}) {
    EXPECT_LT((quat::log(quat::exp(v)) - v).norm(), 1e-14);
  }
}

TEST(QuatLog, JacobianMatchesFiniteDifferences) {
  const double h = 1e-7;
  // Raw 4-vectors, not only unit ones: the model differentiates them as such.
  for (const Vector4& q : {Vector4(0.9, 0.1, -0.3, 0.2), Vector4(1.1, 1e-5, 2e-5, 0.0),
                           Vector4(0.2, 0.7, 0.1, -0.6), Vector4(1.0, 0.0, 0.0, 0.0)}) {
    const Eigen::Matrix<double, 3, 4> J = quat::log_jacobian(q);
    for (int j = 0; j < 4; ++j) {
      Vector4 e = Vector4::Zero();
      e[j] = h;
      const Vector3 fd = (quat::log(q + e) - quat::log(q - e)) / (2 * h);
      EXPECT_LT((J.col(j) - fd).norm(), 1e-7) << q.transpose() << " col " << j;
    }
  }
}

RobotParams test_params(const Vector3& inertia) {
  RobotParams p = verify::reference_robot();
  p.inertia_body = inertia.asDiagonal();
  return p;
}

TEST(SrbmAccel, Translational) {
  const RobotParams p = verify::reference_robot();
  EXPECT_EQ(srbm_translational_accel(std::vector<Vector3>{}, p), Vector3(0, 0, -9.81));
  EXPECT_NEAR(srbm_translational_accel(std::vector<Vector3>{Vector3(0, 0, 117.72)}, p).norm(), 0.0,
              1e-14);
  const Vector3 f1(3, -2, 40), f2(-1, 5, 70);
  const Vector3 both = srbm_translational_accel(std::vector<Vector3>{f1 + f2}, p);
  const Vector3 sum = srbm_translational_accel(std::vector<Vector3>{f1}, p) +
                      srbm_translational_accel(std::vector<Vector3>{f2}, p) - p.gravity;
  EXPECT_LT((both - sum).norm(), 1e-14);
}

TEST(SrbmAccel, Angular) {
  const RobotParams p = test_params(Vector3(0.1, 0.2, 0.2));
  const Vector3 r(0, 0, 0.3);
  const Vector4 q = quat::identity();
  // Force through the center of mass: no torque.
  EXPECT_LT(srbm_angular_accel(r, q, Vector3::Zero(), std::vector<Vector3>{Vector3(0, 0, 50)},
                               std::vector<Vector3>{Vector3(0, 0, 0)}, p)
                .norm(),
            1e-15);
  const Vector3 w_dot = srbm_angular_accel(Vector3::Zero(), q, Vector3::Zero(),
                                           std::vector<Vector3>{Vector3(0, 0, 10)},
                                           std::vector<Vector3>{Vector3(0.1, 0, 0)}, p);
  EXPECT_LT((w_dot - Vector3(0, -5, 0)).norm(), 1e-14);
  EXPECT_LT(srbm_angular_accel(r, q, Vector3(0, 0, 3.0), std::vector<Vector3>{},
                               std::vector<Vector3>{}, p)
                .norm(),
            1e-15);
}

TEST(SrbmAccel, TorqueMappedToBodyFrame) {
  const RobotParams p = test_params(Vector3(0.1, 0.2, 0.3));
  const Vector4 q = quat::from_yaw(std::numbers::pi / 2);
  // World torque (0, -1, 0) is body torque (-1, 0, 0) after a 90 degree yaw.
  const Vector3 w_dot = srbm_angular_accel(Vector3::Zero(), q, Vector3::Zero(),
                                           std::vector<Vector3>{Vector3(0, 0, 10)},
                                           std::vector<Vector3>{Vector3(0.1, 0, 0)}, p);
  EXPECT_LT((w_dot - Vector3(-10, 0, 0)).norm(), 1e-12);
}

TEST(SrbmStep, HoverFixedPoint) {
  const RobotParams p = verify::reference_robot();
  const SrbmState s{Vector3(0, 0, 0.3), Vector3(0, 0, 0.3), quat::identity(), quat::identity()};
  const std::vector<Vector3> feet(4, Vector3(0, 0, 0));
  const SrbmControl u{std::vector<Vector3>(4, Vector3(0, 0, 12.0 * 9.81 / 4))};
  const SrbmState n = srbm_step(s, u, feet, 0.04, p);
  EXPECT_LT((n.r - s.r).norm(), 1e-15);
  EXPECT_EQ(n.q, s.q);
  EXPECT_EQ(n.q_prev, s.q);
}

TEST(SrbmStep, PrincipalAxisSpinOverManySteps) {
  const RobotParams p = test_params(Vector3(0.017, 0.056, 0.065));
  const double dt = 0.04;
  const Vector3 w(0, 0, 0.8);
  SrbmState s{Vector3(0, 0, 10.0), Vector3(0, 0, 10.0), quat::identity(),
              quat::normalized(quat::exp(-w * dt))};
  const Vector4 dq = quat::exp(w * dt);
  Vector4 expected = s.q;
  for (int i = 0; i < 1000; ++i) {
    const SrbmState n = srbm_step(s, {}, std::vector<Vector3>{}, dt, p);
    expected = quat::normalized(quat::mul(expected, dq));
    EXPECT_LE(std::abs(n.q.norm() - 1.0), 1e-9);
    EXPECT_LT((body_rate(n.q_prev, n.q, dt) - body_rate(s.q_prev, s.q, dt)).norm(), 1e-12);
    s = n;
  }
  // The same rotation, up to the sign of the double cover.
  EXPECT_GT(std::abs(s.q.dot(expected)), 1.0 - 1e-9);
}

TEST(SrbmModel, StepJacobiansMatchFiniteDifferences) {
  EXPECT_LT(worst_step_jacobian_error<SrbmModel>(ModelKind::kSrbm, 100), 1e-5);
}

TEST(SrbmModel, RolloutKeepsUnitQuaternions) {
  const auto inst = verify::random_instance(ModelKind::kSrbm, 23);
  const ProblemDims& d = inst.ocp.dims;
  const Vector X = rollout(*inst.ocp.model, inst.ocp.x0, inst.U);
  for (int k = 1; k <= d.N; ++k) {
    EXPECT_LE(std::abs(X.segment<4>(d.state_offset(k) + 6).norm() - 1.0), 1e-9);
    EXPECT_LE(std::abs(X.segment<4>(d.state_offset(k) + 10).norm() - 1.0), 1e-9);
  }
}

double srbm_cost_single_step(const Vector4& q, const Vector4& q_ref, double fz) {
  const ContactPlan plan = one_step_plan({0, kSwing, kSwing, kSwing}, 1);
  const SrbmModelCost cost(plan, {}, {q_ref, q_ref});
  const ProblemDims d{14, 12, 3, 1, 0.04};
  Vector U = Vector::Zero(d.decision_size());
  U[2] = fz;
  U[5] = -50.0;  // swing force, ignored
  Vector x0 = Vector::Zero(14);
  x0.segment<4>(6) = q;
  const Vector X = x0;
  return cost.value({d, x0, X, U});
}

TEST(SrbmModelCost, Examples) {
  const Vector4 q = quat::normalized(Vector4(0.9, 0.1, -0.2, 0.3));
  EXPECT_NEAR(srbm_cost_single_step(q, q, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(srbm_cost_single_step(-q, q, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(srbm_cost_single_step(q, q, -1.0), 1.0 + kEps * kEps / 3.0, 1e-12);
}

TEST(ModelCosts, PartialsMatchFiniteDifferences) {
  for (ModelKind kind : {ModelKind::kIpm, ModelKind::kSrbm}) {
    const auto inst = verify::random_instance(kind, 31);
    const LocomotionOcp& ocp = inst.ocp;
    const CostList model_term = {ocp.costs[1]};
    const Vector X = rollout(*ocp.model, ocp.x0, inst.U);
    const CostDerivatives der =
        evaluate_cost_derivatives(model_term, CostInputs{ocp.dims, ocp.x0, X, inst.U});
    const auto [gx, gu] = verify::fd_cost_partials(model_term, ocp.dims, ocp.x0, X, inst.U);
    EXPECT_LT(verify::max_relative_error(der.dX, gx), 1e-6) << to_string(kind);
    EXPECT_LT(verify::max_relative_error(der.dU, gu), 1e-6) << to_string(kind);
  }
}

TEST(RobotParams, LoadAndValidate) {
  const RobotParams p = load_robot_params(std::string(LEGMPC_SOURCE_DIR) + "/config/robots/a1.yaml");
  EXPECT_EQ(p.mass, 12.0);
  EXPECT_EQ(p.inertia_body(1, 1), 0.056);
  EXPECT_EQ(p.hip_offsets[3], Vector3(-0.183, -0.132, 0.0));
  EXPECT_TRUE(p.invalid_field().empty());
  RobotParams bad = p;
  bad.mass = -1.0;
  EXPECT_EQ(bad.invalid_field(), "mass");
  bad = p;
  bad.inertia_body(0, 0) = -1.0;
  EXPECT_EQ(bad.invalid_field(), "inertia");
}

}  // namespace
}  // namespace legmpc
