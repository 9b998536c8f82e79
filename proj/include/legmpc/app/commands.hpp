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

#ifndef LEGMPC_APP_COMMANDS_HPP_
#define LEGMPC_APP_COMMANDS_HPP_

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "legmpc/sim/simulator.hpp"
#include "legmpc/verify/random_instances.hpp"

namespace legmpc::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitDegraded = 2;

using Overrides = std::vector<std::pair<std::string, std::string>>;

struct RunConfig {
  std::string scenario;
  std::string out_dir = "out";
  std::optional<long long> seed;
  std::optional<std::string> model;
  Overrides overrides;

  /// --set pairs plus the dedicated --seed and --model flags.
  Overrides all_overrides() const {
    Overrides o = overrides;
    if (seed) o.emplace_back("seed", std::to_string(*seed));
    if (model) o.emplace_back("model", *model);
    return o;
  }
};

/// Splits KEY=VALUE; throws std::invalid_argument on a missing '='.
inline std::pair<std::string, std::string> parse_override(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw std::invalid_argument("--set expects KEY=VALUE, got '" + s + "'");
  }
  return {s.substr(0, eq), s.substr(eq + 1)};
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("cannot write " + path.string());
}

inline void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory " + dir);
  }
}

/// Loads, reports problems on `err` and returns nullopt on failure.
inline std::optional<Scenario> load_or_report(const std::string& path, const Overrides& o,
                                              std::ostream& err) {
  if (path.empty()) {
    err << "error: --scenario is required\n";
    return std::nullopt;
  }
  try {
    return load_scenario(path, o);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << path << ": " << e.what() << "\n";
  }
  return std::nullopt;
}

inline int cmd_run(const RunConfig& cfg, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  const auto sc = load_or_report(cfg.scenario, cfg.all_overrides(), err);
  if (!sc) return kExitFailure;
  try {
    ensure_dir(cfg.out_dir);
    const SimLog log = simulate(*sc);
    const std::filesystem::path dir(cfg.out_dir);
    std::ostringstream csv;
    write_csv(log, csv);
    write_text(dir / "trajectory.csv", csv.str());
    const nlohmann::json summary = summary_json(log);
    write_text(dir / "summary.json", summary.dump(2) + "\n");
    write_text(dir / "scenario-resolved.copy", scenario_to_yaml(*sc));
    const int code = exit_code(log);
    out << sc->name << ": " << (log.failure ? "FAILED" : "completed") << ", "
        << log.solves.size() << " solves, " << degraded_solves(log) << " degraded, "
        << summary["violations"]["total"].get<int>() << " terrain violations, rms error "
        << summary["tracking"]["rms_position_error"].get<double>() << " m\n";
    if (log.failure) err << "error: " << log.failure->reason << " at t=" << log.failure->t << "\n";
    return code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

struct CheckConfig {
  std::string model = "ipm";  ///< ipm, srbm or all
  int trials = 100;
  double tol = 1e-5;
  std::uint64_t seed = 1;
};

struct CheckReport {
  std::string model;
  int trials = 0;
  verify::OracleErrors worst;
  double seconds = 0.0;

  double max_error() const {
    return std::max({worst.sensitivity, worst.gradient, worst.step_jacobian});
  }
};

inline CheckReport check_gradients(ModelKind kind, int trials, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckReport rep;
  rep.model = to_string(kind);
  rep.trials = trials;
  for (int i = 0; i < trials; ++i) {
    const verify::RandomInstance inst = verify::random_instance(kind, seed * 1000003ULL + i);
    const verify::OracleErrors e = verify::check_instance(inst);
    rep.worst.sensitivity = std::max(rep.worst.sensitivity, e.sensitivity);
    rep.worst.gradient = std::max(rep.worst.gradient, e.gradient);
    rep.worst.step_jacobian = std::max(rep.worst.step_jacobian, e.step_jacobian);
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

inline int cmd_check_gradients(const CheckConfig& cfg, std::ostream& out = std::cout,
                               std::ostream& err = std::cerr) {
  if (cfg.trials < 1) {
    err << "error: --trials must be at least 1\n";
    return kExitFailure;
  }
  std::vector<ModelKind> kinds;
  if (cfg.model == "all") {
    kinds = {ModelKind::kIpm, ModelKind::kSrbm};
  } else {
    try {
      kinds = {parse_model_kind(cfg.model)};
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitFailure;
    }
  }
  bool ok = true;
  for (ModelKind k : kinds) {
    const CheckReport r = check_gradients(k, cfg.trials, cfg.seed);
    const bool pass = r.max_error() < cfg.tol;
    ok = ok && pass;
    out << r.model << ": " << r.trials << " trials, max relative error sensitivity "
        << r.worst.sensitivity << ", gradient " << r.worst.gradient << ", step jacobian "
        << r.worst.step_jacobian << " (tol " << cfg.tol << ", " << r.seconds << " s) "
        << (pass ? "ok" : "FAIL") << "\n";
  }
  return ok ? kExitOk : kExitFailure;
}

struct BenchResult {
  std::vector<double> cold_ms;
  std::vector<double> warm_ms;
  int decision_size = 0;
};

/// Cold solves of the initial problem and warm solves from a closed loop.
inline BenchResult bench(const Scenario& base, int reps) {
  BenchResult res;
  Scenario sc = base;
  sc.record_timing = true;
  sc.disturbances.clear();
  {
    std::vector<RobotMeasurement> meas;
    std::vector<NominalPose> nominal;
    for (const RobotSpec& r : sc.robots) {
      RobotMeasurement m;
      m.r = r.position;
      m.v = r.velocity;
      m.q = quat::from_yaw(r.yaw);
      meas.push_back(m);
      nominal.push_back({r.position.head<2>(), r.yaw});
    }
    for (int i = 0; i < reps; ++i) {
      const MpcPlan p = mpc_step(MpcState{}, 0.0, meas, nominal, sc);
      res.cold_ms.push_back(p.solve_ms);
      res.decision_size = p.ocp.dims.decision_size();
    }
  }
  sc.duration = (reps + 1) * sc.replan_period;
  const SimLog log = simulate(sc);
  for (const SolveRecord& s : log.solves) {
    if (!s.cold_start && static_cast<int>(res.warm_ms.size()) < reps) res.warm_ms.push_back(s.solve_ms);
  }
  return res;
}

inline nlohmann::json timing_json(const std::vector<double>& ms) {
  nlohmann::json j = {{"samples", ms.size()}};
  if (ms.empty()) return j;
  j["p50_ms"] = detail::percentile(ms, 0.5);
  j["p95_ms"] = detail::percentile(ms, 0.95);
  j["max_ms"] = *std::max_element(ms.begin(), ms.end());
  return j;
}

inline int cmd_bench(const RunConfig& cfg, int reps, std::ostream& out = std::cout,
                     std::ostream& err = std::cerr) {
  if (reps < 1) {
    err << "error: --reps must be at least 1\n";
    return kExitFailure;
  }
  const auto sc = load_or_report(cfg.scenario, cfg.all_overrides(), err);
  if (!sc) return kExitFailure;
  try {
    ensure_dir(cfg.out_dir);
    const BenchResult r = bench(*sc, reps);
    nlohmann::json j = {{"scenario", sc->name},
                        {"model", to_string(sc->model)},
                        {"horizon_steps", sc->N},
                        {"decision_size", r.decision_size},
                        {"repetitions", reps},
                        {"cold", timing_json(r.cold_ms)},
                        {"warm", timing_json(r.warm_ms)}};
    write_text(std::filesystem::path(cfg.out_dir) / "bench.json", j.dump(2) + "\n");
    out << sc->name << " (" << to_string(sc->model) << ", N=" << sc->N << "): cold p95 "
        << j["cold"].value("p95_ms", 0.0) << " ms, warm p95 " << j["warm"].value("p95_ms", 0.0)
        << " ms\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

inline int cmd_validate(const RunConfig& cfg, std::ostream& out = std::cout,
                        std::ostream& err = std::cerr) {
  const auto sc = load_or_report(cfg.scenario, cfg.all_overrides(), err);
  if (!sc) return kExitFailure;
  out << cfg.scenario << ": ok (" << to_string(sc->model) << ", " << sc->robots.size()
      << " robot(s), " << sc->terrain.gaps.size() << " gap(s), "
      << (sc->terrain.stones ? sc->terrain.stones->stones.size() : 0) << " stone(s))\n";
  return kExitOk;
}

}  // namespace legmpc::app

#endif  // LEGMPC_APP_COMMANDS_HPP_
