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

// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "legmpc/app/commands.hpp"

namespace legmpc {
namespace {

// Tolerances and budgets.
constexpr int kOracleTrials = 100;
constexpr double kOracleTol = 1e-5;
constexpr double kOracleSeconds = 60.0;
constexpr double kHessianSymmetryTol = 1e-12;
constexpr double kHessianPsdTol = -1e-8;
constexpr double kBranchTol = 1e-10;
constexpr int kQuatSteps = 1000;
constexpr double kQuatNormTol = 1e-9;
constexpr double kSpinRateTol = 1e-12;
constexpr double kStationaryGradTol = 1e-6;
constexpr int kStationaryMaxIterations = 1;
constexpr double kPushBound = 0.05;   // m
constexpr double kPushWindow = 2.0;   // s
constexpr double kStoneRate = 0.95;
constexpr double kMinRobotDistance = 0.9;  // m
constexpr double kIpmBudgetMs = 20.0;
constexpr double kSrbmBudgetMs = 60.0;
constexpr int kBenchReps = 100;

struct Line {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

Scenario bundled(const std::string& name, const app::Overrides& o = {}) {
  return load_scenario(std::string(LEGMPC_SOURCE_DIR) + "/scenarios/" + name + ".scenario", o);
}

Line sensitivity_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (ModelKind kind : {ModelKind::kIpm, ModelKind::kSrbm}) {
    for (int i = 0; i < kOracleTrials; ++i) {
      worst = std::max(worst, verify::check_instance(verify::random_instance(kind, 1000 + i)).sensitivity);
    }
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream os;
  os << 2 * kOracleTrials << " instances, max rel err " << worst << " (< " << kOracleTol << "), "
     << s << " s (< " << kOracleSeconds << ")";
  return {worst < kOracleTol && s < kOracleSeconds, os.str()};
}

Line gradient_hessian_oracle() {
  double grad = 0.0, asym = 0.0, min_eig = 0.0;
  for (ModelKind kind : {ModelKind::kIpm, ModelKind::kSrbm}) {
    for (int i = 0; i < kOracleTrials; ++i) {
      const verify::RandomInstance inst = verify::random_instance(kind, 2000 + i);
      grad = std::max(grad, verify::check_instance(inst).gradient);
      const verify::OracleErrors h = verify::check_hessian(inst);
      asym = std::max(asym, h.hessian_asymmetry);
      min_eig = std::min(min_eig, h.hessian_min_eigenvalue);
    }
  }
  std::ostringstream os;
  os << "gradient rel err " << grad << " (< " << kOracleTol << "), hessian asymmetry " << asym
     << " (<= " << kHessianSymmetryTol << "), min eigenvalue " << min_eig << " (>= "
     << kHessianPsdTol << ")";
  return {grad < kOracleTol && asym <= kHessianSymmetryTol && min_eig >= kHessianPsdTol, os.str()};
}

Line smooth_penalty() {
  const SmoothPlusParams sp{0.0, 0.1};
  // Each branch evaluated at its own boundary, compared with the neighbour.
  const double e = sp.eps;
  const SmoothPlusValue quad{e * e + e * e / 3.0, -2.0 * e, 2.0};  // G^2 + eps^2/3 at G = -eps
  const SmoothPlusValue inner_lo = smooth_plus_eval(-e, sp);
  const SmoothPlusValue inner_hi = smooth_plus_eval(std::nextafter(e, 0.0), sp);
  double branch = std::max({std::abs(quad.value - inner_lo.value), std::abs(quad.d1 - inner_lo.d1),
                            std::abs(quad.d2 - inner_lo.d2), std::abs(inner_hi.value),
                            std::abs(inner_hi.d1), std::abs(inner_hi.d2)});
  const SmoothPlusValue below = smooth_plus_eval(std::nextafter(-e, -1.0), sp);
  branch = std::max({branch, std::abs(below.value - quad.value), std::abs(below.d1 - quad.d1),
                     std::abs(below.d2 - quad.d2)});
  bool zero_set = true, non_negative = true;
  for (int i = -3000; i <= 3000; ++i) {
    const double g = 1e-4 * i;
    const double v = smooth_plus(g, sp);
    non_negative = non_negative && v >= 0.0;
    zero_set = zero_set && ((v == 0.0) == (g >= e));
  }
  std::ostringstream os;
  os << "branch mismatch " << branch << " (<= " << kBranchTol << "), S >= 0 "
     << (non_negative ? "yes" : "no") << ", S = 0 iff G >= eps " << (zero_set ? "yes" : "no");
  return {branch <= kBranchTol && non_negative && zero_set, os.str()};
}

Line quaternion_integrity() {
  const RobotParams p = verify::reference_robot();
  const double dt = 0.04;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  double norm_err = 0.0;
  // Stance forces near hover with random tangential parts and lever arms.
  SrbmState s{Vector3(0, 0, 0.3), Vector3(0, 0, 0.3), quat::identity(), quat::identity()};
  for (int k = 0; k < kQuatSteps; ++k) {
    std::vector<Vector3> feet, f;
    for (int leg = 0; leg < kLegCount; ++leg) {
      feet.push_back(s.r + p.hip_offsets[leg] + Vector3(0.02 * uni(rng), 0.02 * uni(rng), -0.3));
      f.push_back(Vector3(0.05 * uni(rng), 0.05 * uni(rng), 12.0 * 9.81 / 4 + 0.05 * uni(rng)));
    }
    s = srbm_step(s, {f}, feet, dt, p);
    norm_err = std::max({norm_err, std::abs(s.q.norm() - 1.0), std::abs(s.q_prev.norm() - 1.0)});
  }
  double rate_err = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    Vector3 w = Vector3::Zero();
    w[axis] = 0.8;
    SrbmState spin{Vector3(0, 0, 10.0), Vector3(0, 0, 10.0), quat::identity(),
                   quat::normalized(quat::exp(-w * dt))};
    for (int k = 0; k < kQuatSteps; ++k) {
      const SrbmState n = srbm_step(spin, {}, std::vector<Vector3>{}, dt, p);
      rate_err = std::max(rate_err, (body_rate(n.q_prev, n.q, dt) - body_rate(spin.q_prev, spin.q, dt))
                                        .lpNorm<Eigen::Infinity>());
      norm_err = std::max(norm_err, std::abs(n.q.norm() - 1.0));
      spin = n;
    }
  }
  std::ostringstream os;
  os << kQuatSteps << "-step rollouts, max | |q| - 1 | " << norm_err << " (<= " << kQuatNormTol
     << "), spin rate change per step " << rate_err << " (<= " << kSpinRateTol << ")";
  return {norm_err <= kQuatNormTol && rate_err <= kSpinRateTol, os.str()};
}

Line equilibrium_stationarity() {
  const RobotParams params = verify::reference_robot();
  const int N = 20;
  const double dt = 0.04;
  RobotSetup s;
  s.params = params;
  s.schedule = build_gait_schedule(GaitSpec::stand(), 0.0, N, dt, true);
  s.plan = reference_base_trajectory({}, Vector3(0, 0, 0.3), 0.0, N, dt);
  s.plan.s_ref = reference_footholds(s.schedule, s.plan, params.hip_offsets);
  s.x0 = ipm_state_vector(Vector3(0, 0, 0.3), Vector3::Zero(), dt);
  const LocomotionOcp ocp = assemble_locomotion_ocp(ModelKind::kIpm, {s});
  const Vector X = rollout(*ocp.model, ocp.x0, ocp.U_init);
  const SensitivityMatrix S = sensitivity(*ocp.model, X, ocp.U_init, ocp.x0);
  Vector g = cost_gradient(ocp.costs, X, ocp.U_init, S, ocp.x0);
  for (int i : ocp.frozen) g[i] = 0.0;
  const SolveResult r = ocp.solve(ocp.U_init, {});
  std::ostringstream os;
  os << "gradient norm " << g.norm() << " (< " << kStationaryGradTol << "), " << r.stats.iterations
     << " iteration(s) (<= " << kStationaryMaxIterations << ")";
  return {g.norm() < kStationaryGradTol && r.stats.iterations <= kStationaryMaxIterations &&
              r.stats.converged,
          os.str()};
}

struct PushOutcome {
  bool failed = false;
  double max_deviation = 0.0;
  bool returned = false;
};

PushOutcome push_outcome(bool optimize) {
  const SimLog log =
      simulate(bundled("push_recovery", {{"foothold_optimization", optimize ? "true" : "false"}}));
  PushOutcome o;
  o.failed = log.failure.has_value() || log.disturbances.size() != 1;
  if (o.failed) return o;
  const RecoveryStats rs = recovery_stats(log, log.disturbances[0]);
  o.max_deviation = rs.max_deviation;
  o.returned = rs.recovery_time && *rs.recovery_time <= kPushWindow + 1e-9;
  return o;
}

Line push_recovery() {
  static_assert(kPushBound == kRecoveryBound && kPushWindow == kRecoveryWindow);
  const PushOutcome opt = push_outcome(true);
  const PushOutcome frozen = push_outcome(false);
  const bool opt_ok = !opt.failed && opt.returned;
  const bool frozen_violates = frozen.failed || frozen.max_deviation > kPushBound || !frozen.returned;
  std::ostringstream os;
  os << "optimized: peak " << opt.max_deviation << " m, "
     << (opt_ok ? "back within 5 cm in 2 s" : "not recovered") << "; frozen: "
     << (frozen.failed ? std::string("run failed")
                       : "peak " + fmt("%.4g", frozen.max_deviation) + " m" +
                             (frozen.returned ? "" : ", not back in 2 s"))
     << (frozen_violates ? " (violates bound)" : " (within bound)");
  return {opt_ok && frozen_violates, os.str()};
}

Line gap_crossing() {
  const SimLog with = simulate(bundled("gap_crossing"));
  const SimLog without = simulate(bundled("gap_crossing", {{"weights.K8", "0"}}));
  const ViolationReport a = touchdown_violations(with);
  const ViolationReport b = touchdown_violations(without);
  const double half_width = with.terrain.gaps.empty() ? 0.0 : with.terrain.gaps[0].half_width;
  std::ostringstream os;
  os << "gap width " << 2.0 * half_width << " m, " << with.duration << " s: "
     << a.gap_violations << " violation(s) of " << a.total() << " (== 0)"
     << (with.failure ? ", run failed" : "") << "; K8 = 0: " << b.gap_violations
     << " violation(s) (>= 1)";
  return {!with.failure && a.gap_violations == 0 && a.total() > 0 && half_width == 0.16 &&
              b.gap_violations >= 1,
          os.str()};
}

Line stepping_stones() {
  const SimLog log = simulate(bundled("stepping_stones"));
  const ViolationReport r = touchdown_violations(log);
  const double on = r.total() ? 1.0 - r.stone_rate() : 0.0;
  std::ostringstream os;
  os << r.total() - r.stone_violations << " of " << r.total() << " footholds on a stone ("
     << 100.0 * on << "% >= " << 100.0 * kStoneRate << "%)" << (log.failure ? ", run failed" : "");
  return {!log.failure && r.total() > 0 && on >= kStoneRate, os.str()};
}

Line two_robot_coupling() {
  const SimLog log = simulate(bundled("two_robot_crossing"));
  const auto d = min_inter_robot_distance(log);
  // The robots start on opposite sides and must end up swapped in x.
  double ax = 0.0, bx = 0.0;
  for (const SimRecord& r : log.records) (r.robot == 0 ? ax : bx) = r.r.x();
  std::ostringstream os;
  os << "minimum distance " << (d ? *d : 0.0) << " m (>= " << kMinRobotDistance << "), final x "
     << ax << " / " << bx << (log.failure ? ", run failed" : "");
  return {!log.failure && d && *d >= kMinRobotDistance && ax > bx, os.str()};
}

Line throughput() {
  const Scenario ipm = bundled("trot_walk", {{"model", "ipm"}});
  const Scenario srbm = bundled("trot_walk", {{"model", "srbm"}});
  const app::BenchResult a = app::bench(ipm, kBenchReps);
  const app::BenchResult b = app::bench(srbm, kBenchReps);
  const double pa = detail::percentile(a.warm_ms, 0.95);
  const double pb = detail::percentile(b.warm_ms, 0.95);
  std::ostringstream os;
  os << "warm p95 IPM N=" << ipm.N << " " << pa << " ms (< " << kIpmBudgetMs << "), SRBM N="
     << srbm.N << " " << pb << " ms (< " << kSrbmBudgetMs << ")";
  return {static_cast<int>(a.warm_ms.size()) == kBenchReps &&
              static_cast<int>(b.warm_ms.size()) == kBenchReps && pa < kIpmBudgetMs &&
              pb < kSrbmBudgetMs,
          os.str()};
}

}  // namespace
}  // namespace legmpc

int main() {
  using namespace legmpc;
  const std::vector<std::pair<const char*, std::function<Line()>>> criteria = {
      {"sensitivity oracle", sensitivity_oracle},
      {"gradient/hessian oracle", gradient_hessian_oracle},
      {"smooth penalty", smooth_penalty},
      {"quaternion integrity", quaternion_integrity},
      {"equilibrium stationarity", equilibrium_stationarity},
      {"push recovery", push_recovery},
      {"gap crossing", gap_crossing},
      {"stepping stones", stepping_stones},
      {"two-robot coupling", two_robot_coupling},
      {"throughput budget", throughput},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Line l{false, ""};
    try {
      l = check();
    } catch (const std::exception& e) {
      l = {false, std::string("error: ") + e.what()};
    }
    failed += l.pass ? 0 : 1;
    std::printf("%s %s: %s\n", l.pass ? "PASS" : "FAIL", name, l.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
