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

#ifndef LEGMPC_SIM_SIM_LOG_HPP_
#define LEGMPC_SIM_SIM_LOG_HPP_

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "legmpc/scenarios/scenario.hpp"

namespace legmpc {

inline constexpr double kRecoveryBound = 0.05;   ///< m
inline constexpr double kRecoveryWindow = 2.0;   ///< s

/// One row per robot per substep.
struct SimRecord {
  double t = 0.0;
  int robot = 0;
  Vector3 r = Vector3::Zero();
  Vector3 v = Vector3::Zero();
  Vector4 q = quat::identity();
  std::array<bool, kLegCount> contact{};
  /// Current contact, or next planned foothold of a swing leg.
  std::array<std::optional<Vector3>, kLegCount> foothold{};
  Vector3 ref = Vector3::Zero();  ///< commanded nominal position
  bool replan = false;
  double solve_ms = 0.0;
  bool converged = true;
};

struct TouchdownRecord {
  double t = 0.0;
  int robot = 0;
  int leg = 0;
  Vector3 position = Vector3::Zero();
};

struct SolveRecord {
  double t = 0.0;
  double solve_ms = 0.0;
  int iterations = 0;
  bool converged = true;
  bool cold_start = false;
  std::string status;
};

struct DisturbanceRecord {
  double t = 0.0;          ///< configured time
  double applied_t = 0.0;  ///< substep it landed on
  int robot = 0;
  Vector3 impulse = Vector3::Zero();
  Vector3 delta_v = Vector3::Zero();  ///< world frame
};

struct FailureRecord {
  double t = 0.0;
  int robot = -1;
  std::string reason;
};

struct SimLog {
  std::string scenario;
  std::string model;
  std::uint64_t seed = 0;
  double duration = 0.0;
  int robot_count = 1;
  bool record_timing = true;
  std::vector<SimRecord> records;
  std::vector<TouchdownRecord> touchdowns;
  std::vector<SolveRecord> solves;
  std::vector<DisturbanceRecord> disturbances;
  std::optional<FailureRecord> failure;
  TerrainSpec terrain;
};

namespace detail {

inline std::string fmt(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

inline double percentile(std::vector<double> v, double p) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = p * (v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - lo) * (v[hi] - v[lo]);
}

inline nlohmann::json vec_json(const Eigen::VectorXd& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace detail

inline std::vector<std::string> csv_columns() {
  std::vector<std::string> c = {"t", "robot", "r_x", "r_y", "r_z", "q_w", "q_x", "q_y", "q_z"};
  for (const char* leg : kLegNames) c.push_back(std::string("c_") + leg);
  for (const char* leg : kLegNames) {
    for (const char* ax : {"x", "y", "z"}) c.push_back(std::string("s_") + leg + "_" + ax);
  }
  for (const char* col : {"ref_x", "ref_y", "ref_z", "v_x", "v_y", "v_z", "replan", "solve_ms",
                          "converged"}) {
    c.push_back(col);
  }
  return c;
}

inline void write_csv(const SimLog& log, std::ostream& os) {
  const auto cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  using detail::fmt;
  for (const SimRecord& r : log.records) {
    os << fmt(r.t) << "," << r.robot;
    for (int i = 0; i < 3; ++i) os << "," << fmt(r.r[i]);
    for (int i = 0; i < 4; ++i) os << "," << fmt(r.q[i]);
    for (bool c : r.contact) os << "," << (c ? 1 : 0);
    for (const auto& s : r.foothold) {
      for (int i = 0; i < 3; ++i) os << "," << (s ? fmt((*s)[i]) : "nan");
    }
    for (int i = 0; i < 3; ++i) os << "," << fmt(r.ref[i]);
    for (int i = 0; i < 3; ++i) os << "," << fmt(r.v[i]);
    os << "," << (r.replan ? 1 : 0) << "," << fmt(log.record_timing ? r.solve_ms : 0.0) << ","
       << (r.converged ? 1 : 0) << "\n";
  }
}

struct TrackingStats {
  double rms = 0.0;
  double max = 0.0;
  double rms_planar = 0.0;
};

/// Base position error against the commanded nominal path.
inline TrackingStats tracking_stats(const SimLog& log, int robot) {
  TrackingStats s;
  int n = 0;
  double sum = 0.0, sum_planar = 0.0;
  for (const SimRecord& r : log.records) {
    if (r.robot != robot) continue;
    const Vector3 e = r.r - r.ref;
    sum += e.squaredNorm();
    sum_planar += e.head<2>().squaredNorm();
    s.max = std::max(s.max, e.norm());
    ++n;
  }
  if (n > 0) {
    s.rms = std::sqrt(sum / n);
    s.rms_planar = std::sqrt(sum_planar / n);
  }
  return s;
}

struct RecoveryStats {
  double max_deviation = 0.0;
  std::optional<double> recovery_time;  ///< from the push, s
  bool recovered = false;               ///< within kRecoveryWindow
};

/**
 * Recovery after a push: the first time from which the base stays within
 * kRecoveryBound of nominal until the next push on that robot or the end of
 * the log.
 */
inline RecoveryStats recovery_stats(const SimLog& log, const DisturbanceRecord& d) {
  double until = std::numeric_limits<double>::infinity();
  for (const DisturbanceRecord& o : log.disturbances) {
    if (o.robot == d.robot && o.applied_t > d.applied_t) until = std::min(until, o.applied_t);
  }
  RecoveryStats s;
  bool inside = false;
  double inside_since = 0.0;
  for (const SimRecord& r : log.records) {
    if (r.robot != d.robot || r.t < d.applied_t || r.t >= until) continue;
    const double e = (r.r - r.ref).norm();
    s.max_deviation = std::max(s.max_deviation, e);
    if (e > kRecoveryBound) {
      inside = false;
    } else if (!inside) {
      inside = true;
      inside_since = r.t;
    }
  }
  if (inside && !log.failure) s.recovery_time = inside_since - d.applied_t;
  s.recovered = s.recovery_time && *s.recovery_time <= kRecoveryWindow + 1e-9;
  return s;
}

inline std::optional<double> min_inter_robot_distance(const SimLog& log) {
  if (log.robot_count < 2) return std::nullopt;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < log.records.size(); ++i) {
    const SimRecord& a = log.records[i];
    const SimRecord& b = log.records[i + 1];
    if (a.robot == 0 && b.robot == 1 && a.t == b.t) best = std::min(best, (a.r - b.r).norm());
  }
  return std::isfinite(best) ? std::optional<double>(best) : std::nullopt;
}

inline ViolationReport touchdown_violations(const SimLog& log) {
  std::vector<Vector3> pts;
  for (const TouchdownRecord& td : log.touchdowns) pts.push_back(td.position);
  return validate_footholds(pts, log.terrain);
}

inline int degraded_solves(const SimLog& log) {
  return static_cast<int>(std::count_if(log.solves.begin(), log.solves.end(),
                                        [](const SolveRecord& s) { return !s.converged; }));
}

/// 0 success, 2 degraded solves or terrain violations, 1 failure.
inline int exit_code(const SimLog& log) {
  if (log.failure) return 1;
  if (degraded_solves(log) > 0 || touchdown_violations(log).violations() > 0) return 2;
  return 0;
}

inline nlohmann::json summary_json(const SimLog& log) {
  using nlohmann::json;
  json j;
  j["scenario"] = log.scenario;
  j["model"] = log.model;
  j["seed"] = log.seed;
  j["duration"] = log.duration;
  j["completed"] = !log.failure.has_value();
  if (log.failure) {
    j["failure"] = {{"t", log.failure->t}, {"robot", log.failure->robot},
                    {"reason", log.failure->reason}};
  } else {
    j["failure"] = nullptr;
  }

  json robots = json::array();
  double sum_sq = 0.0, max_err = 0.0;
  for (int r = 0; r < log.robot_count; ++r) {
    const TrackingStats ts = tracking_stats(log, r);
    robots.push_back({{"robot", r},
                      {"rms_position_error", ts.rms},
                      {"rms_planar_error", ts.rms_planar},
                      {"max_position_error", ts.max}});
    sum_sq += ts.rms * ts.rms;
    max_err = std::max(max_err, ts.max);
  }
  j["tracking"] = {{"rms_position_error", std::sqrt(sum_sq / std::max(1, log.robot_count))},
                   {"max_position_error", max_err},
                   {"robots", robots}};

  const ViolationReport vr = touchdown_violations(log);
  j["violations"] = {{"footholds", vr.total()},
                     {"gap", vr.gap_violations},
                     {"off_stone", vr.stone_violations},
                     {"total", vr.violations()},
                     {"gap_rate", vr.gap_rate()},
                     {"stone_rate", vr.stone_rate()}};
  json tds = json::array();
  for (std::size_t i = 0; i < log.touchdowns.size(); ++i) {
    const TouchdownRecord& td = log.touchdowns[i];
    json e = {{"t", td.t},
              {"robot", td.robot},
              {"leg", kLegNames[td.leg]},
              {"position", detail::vec_json(td.position)},
              {"in_gap", vr.checks[i].in_gap},
              {"off_stone", vr.checks[i].off_stone}};
    if (log.terrain.stones) e["stone_distance"] = vr.checks[i].stone_distance;
    tds.push_back(e);
  }
  j["touchdowns"] = tds;

  std::vector<double> ms;
  double iters = 0.0;
  for (const SolveRecord& s : log.solves) {
    ms.push_back(s.solve_ms);
    iters += s.iterations;
  }
  json solves = {{"count", log.solves.size()},
                 {"degraded", degraded_solves(log)},
                 {"mean_iterations", log.solves.empty() ? 0.0 : iters / log.solves.size()}};
  if (log.record_timing) {
    solves["p50_ms"] = detail::percentile(ms, 0.5);
    solves["p95_ms"] = detail::percentile(ms, 0.95);
    solves["max_ms"] = ms.empty() ? 0.0 : *std::max_element(ms.begin(), ms.end());
  } else {
    solves["p50_ms"] = nullptr;
    solves["p95_ms"] = nullptr;
    solves["max_ms"] = nullptr;
  }
  j["solves"] = solves;

  json dist = json::array();
  for (const DisturbanceRecord& d : log.disturbances) {
    const RecoveryStats rs = recovery_stats(log, d);
    json e = {{"t", d.t},
              {"applied_t", d.applied_t},
              {"robot", d.robot},
              {"impulse", detail::vec_json(d.impulse)},
              {"delta_v", detail::vec_json(d.delta_v)},
              {"max_deviation", rs.max_deviation},
              {"recovered", rs.recovered},
              {"recovery_bound", kRecoveryBound},
              {"recovery_window", kRecoveryWindow}};
    e["recovery_time"] = rs.recovery_time ? json(*rs.recovery_time) : json(nullptr);
    dist.push_back(e);
  }
  j["disturbances"] = dist;
  const auto dmin = min_inter_robot_distance(log);
  j["min_inter_robot_distance"] = dmin ? json(*dmin) : json(nullptr);
  j["exit_code"] = exit_code(log);
  return j;
}

}  // namespace legmpc

#endif  // LEGMPC_SIM_SIM_LOG_HPP_
