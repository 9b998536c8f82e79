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

#ifndef LEGMPC_SCENARIOS_SCENARIO_HPP_
#define LEGMPC_SCENARIOS_SCENARIO_HPP_

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "legmpc/core/solver.hpp"
#include "legmpc/io/default_config.hpp"
#include "legmpc/io/yaml_util.hpp"
#include "legmpc/locomotion/ocp_builder.hpp"
#include "legmpc/scenarios/validation.hpp"

namespace legmpc {

struct CommandSegment {
  double t = 0.0;  ///< start time, s
  Eigen::Vector2d v_xy = Eigen::Vector2d::Zero();
  double yaw_rate = 0.0;
  std::optional<double> target_height;
};

struct RobotSpec {
  std::string params_source;  ///< file the parameters came from, or "inline"
  RobotParams params;
  Vector3 position = Vector3(0.0, 0.0, 0.3);
  Vector3 velocity = Vector3::Zero();
  double yaw = 0.0;
  std::vector<CommandSegment> commands;  ///< empty: use the scenario commands
};

struct DisturbanceSpec {
  double t = 0.0;
  Vector3 impulse = Vector3::Zero();  ///< body frame, N s
  int robot = 0;
};

struct Scenario {
  std::string name;
  std::string source;  ///< path of the scenario file
  ModelKind model = ModelKind::kIpm;
  double duration = 5.0;
  std::uint64_t seed = 1;
  int N = 20;
  double dt = 0.04;
  double replan_period = 0.04;
  GaitSpec gait;
  CostWeights weights;
  double smooth_eps = 0.1;
  bool optimize_footholds = true;
  double target_height = 0.3;
  double hold_gain = 0.0;
  std::vector<CommandSegment> commands;
  TerrainSpec terrain;
  std::vector<RobotSpec> robots;
  double min_distance = 1.0;
  std::vector<DisturbanceSpec> disturbances;
  SolverOptions solver;  ///< levenberg_lambda already picked for `model`
  double ipm_levenberg_lambda = 1e-6;
  double srbm_levenberg_lambda = 1e-9;
  bool record_timing = true;

  double substep() const { return dt / 4.0; }

  /// Command in force for `robot` at time t.
  CommandInput command_at(int robot, double t) const {
    const auto& segs = robots[robot].commands.empty() ? commands : robots[robot].commands;
    CommandInput c;
    c.target_height = target_height;
    c.hold_gain = hold_gain;
    for (const CommandSegment& s : segs) {
      if (s.t > t + 1e-12) break;
      c.v_xy = s.v_xy;
      c.yaw_rate = s.yaw_rate;
      c.target_height = s.target_height.value_or(target_height);
    }
    return c;
  }
};

namespace detail {

/// Deep merge of mappings; `over` wins, sequences and scalars are replaced.
inline YAML::Node merge_yaml(const YAML::Node& base, const YAML::Node& over) {
  if (!over.IsDefined() || over.IsNull()) return base;
  if (!base.IsMap() || !over.IsMap()) return over;
  YAML::Node out(YAML::NodeType::Map);
  for (const auto& kv : base) out[kv.first.as<std::string>()] = kv.second;
  for (const auto& kv : over) {
    const std::string key = kv.first.as<std::string>();
    const YAML::Node b = base[key];
    out[key] = merge_yaml(b.IsDefined() ? b : YAML::Node(), kv.second);
  }
  return out;
}

inline std::vector<std::string> split_dotted(const std::string& key) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t dot = key.find('.', start);
    parts.push_back(key.substr(start, dot == std::string::npos ? std::string::npos : dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return parts;
}

inline bool is_index(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

inline void set_path(YAML::Node node, const std::vector<std::string>& parts, std::size_t i,
                     const YAML::Node& value, const std::string& key) {
  const std::string& part = parts[i];
  const bool last = i + 1 == parts.size();
  if (node.IsSequence() && is_index(part)) {
    const std::size_t idx = std::stoul(part);
    if (idx >= node.size()) throw ConfigError("--set", key, 0, "index out of range");
    if (last) {
      node[idx] = value;
    } else {
      set_path(node[idx], parts, i + 1, value, key);
    }
    return;
  }
  if (!node.IsMap() || !node[part].IsDefined()) {
    throw ConfigError("--set", key, 0, "no such key");
  }
  if (last) {
    node[part] = value;
  } else {
    set_path(node[part], parts, i + 1, value, key);
  }
}

inline std::vector<CommandSegment> parse_commands(const yaml::Field& f) {
  std::vector<CommandSegment> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const yaml::Field c = f[i];
    c.require_keys({"t", "v_xy", "yaw_rate", "target_height"});
    CommandSegment s;
    s.t = c["t"].get(0.0);
    if (c["v_xy"].defined()) s.v_xy = c["v_xy"].vec2();
    s.yaw_rate = c["yaw_rate"].get(0.0);
    if (c["target_height"].defined()) {
      s.target_height = c["target_height"].as<double>();
      if (!(*s.target_height > 0.0)) c["target_height"].fail("must be positive");
    }
    if (!(s.t >= 0.0)) c["t"].fail("must be non-negative");
    if (!out.empty() && s.t < out.back().t) c["t"].fail("command times must be non-decreasing");
    if (!s.v_xy.allFinite() || !std::isfinite(s.yaw_rate)) c.fail("non-finite command");
    out.push_back(s);
  }
  return out;
}

inline std::string resolve_robot_file(const std::string& name, const std::string& scenario_path) {
  namespace fs = std::filesystem;
  const fs::path p(name);
  if (p.is_absolute()) return p.string();
  std::vector<fs::path> candidates;
  if (!scenario_path.empty()) candidates.push_back(fs::path(scenario_path).parent_path() / p);
#ifdef LEGMPC_SOURCE_DIR
  candidates.push_back(fs::path(LEGMPC_SOURCE_DIR) / "config" / p);
#endif
  for (const auto& c : candidates) {
    if (fs::exists(c)) return c.lexically_normal().string();
  }
  return candidates.empty() ? p.string() : candidates.front().lexically_normal().string();
}

inline GaitSpec parse_gait(const yaml::Field& f, const YAML::Node& user,
                           const std::vector<std::string>& override_keys) {
  f.require_keys({"type", "period", "duty", "offsets"});
  const std::string type = f["type"].as<std::string>();
  GaitSpec g;
  if (type == "trot") {
    g = GaitSpec::trot();
  } else if (type == "walk") {
    g = GaitSpec::walk();
  } else if (type == "stand") {
    g = GaitSpec::stand();
  } else if (type == "custom") {
    g.name = "custom";
  } else {
    f["type"].fail("unknown gait type '" + type + "' (trot, walk, stand, custom)");
  }
  // Preset values apply unless the scenario file names the field itself.
  const bool user_gait = user.IsMap() && user["gait"].IsDefined() && user["gait"].IsMap();
  auto named = [&](const char* k) {
    const std::string dotted = std::string("gait.") + k;
    return type == "custom" || (user_gait && user["gait"][k].IsDefined()) ||
           std::find(override_keys.begin(), override_keys.end(), dotted) != override_keys.end();
  };
  if (named("period")) g.period = f["period"].as<double>();
  if (named("duty")) g.duty = f["duty"].as<double>();
  if (named("offsets")) {
    const Eigen::VectorXd o = f["offsets"].vector(kLegCount);
    for (int i = 0; i < kLegCount; ++i) g.offsets[i] = o[i];
  }
  if (!(g.period > 0.0)) f["period"].fail("must be positive");
  if (!(g.duty > 0.0 && g.duty <= 1.0)) f["duty"].fail("must be in (0, 1]");
  return g;
}

inline std::vector<std::string> keys_of(
    const std::vector<std::pair<std::string, std::string>>& overrides) {
  std::vector<std::string> keys;
  for (const auto& kv : overrides) keys.push_back(kv.first);
  return keys;
}

inline double positive(const yaml::Field& f) {
  const double v = f.as<double>();
  if (!(v > 0.0) || !std::isfinite(v)) f.fail("must be positive");
  return v;
}

inline double non_negative(const yaml::Field& f) {
  const double v = f.as<double>();
  if (!(v >= 0.0) || !std::isfinite(v)) f.fail("must be non-negative");
  return v;
}

}  // namespace detail

/// Merged tree of the built-in defaults and a user tree, with overrides.
inline YAML::Node resolve_scenario_tree(const YAML::Node& user,
                                        const std::vector<std::pair<std::string, std::string>>&
                                            overrides = {}) {
  YAML::Node merged = detail::merge_yaml(yaml::parse_text(kDefaultScenarioYaml, "defaults"),
                                         user.IsDefined() && !user.IsNull() ? user : YAML::Node());
  for (const auto& [key, text] : overrides) {
    YAML::Node value;
    try {
      value = YAML::Load(text);
    } catch (const YAML::Exception& e) {
      throw ConfigError("--set", key, 0, "cannot parse value '" + text + "'");
    }
    detail::set_path(merged, detail::split_dotted(key), 0, value, key);
  }
  return merged;
}

/**
 * Validates a merged scenario tree. `user` and `override_keys` are used only
 * to tell explicitly named gait fields from defaults.
 */
inline Scenario parse_scenario(const YAML::Node& merged, const std::string& source,
                               const YAML::Node& user = YAML::Node(),
                               const std::vector<std::string>& override_keys = {}) {
  using yaml::Field;
  const Field root(merged, "", source);
  root.require_keys({"name", "model", "duration", "seed", "horizon", "replan_period", "gait",
                     "weights", "smooth_eps", "foothold_optimization", "reference", "commands",
                     "terrain", "robots", "collision", "disturbances", "solver", "log"});
  Scenario sc;
  sc.source = source;
  sc.name = root["name"].as<std::string>();
  try {
    sc.model = parse_model_kind(root["model"].as<std::string>());
  } catch (const std::invalid_argument& e) {
    root["model"].fail(e.what());
  }
  sc.duration = detail::positive(root["duration"]);
  const long long seed = root["seed"].as<long long>();
  if (seed < 0) root["seed"].fail("must be non-negative");
  sc.seed = static_cast<std::uint64_t>(seed);

  const Field hz = root["horizon"];
  hz.require_keys({"steps", "dt"});
  sc.N = hz["steps"].as<int>();
  if (sc.N < 1) hz["steps"].fail("must be at least 1");
  sc.dt = detail::positive(hz["dt"]);
  sc.replan_period = detail::positive(root["replan_period"]);
  {
    const double ratio = sc.replan_period / sc.substep();
    if (std::abs(ratio - std::round(ratio)) > 1e-9 || sc.replan_period > 4.0 * sc.dt + 1e-12) {
      root["replan_period"].fail("must be a multiple of dt/4 and at most 4 dt");
    }
  }

  sc.gait = detail::parse_gait(root["gait"], user, override_keys);
  if (sc.model == ModelKind::kIpm) {
    // Build one full cycle to reject gaits with flight phases up front.
    const int cycle = std::max(1, static_cast<int>(std::ceil(sc.gait.period / sc.dt)) + 1);
    try {
      build_gait_schedule(sc.gait, 0.0, cycle, sc.dt, true);
    } catch (const InfeasibleGaitError& e) {
      root["gait"]["duty"].fail(e.what());
    }
  }

  const Field w = root["weights"];
  w.require_keys({"K1", "K2", "K3", "K4", "K5", "K6", "K7", "K8", "K9", "K10", "K11"});
  double* slots[] = {&sc.weights.K1, &sc.weights.K2, &sc.weights.K3, &sc.weights.K4,
                     &sc.weights.K5, &sc.weights.K6, &sc.weights.K7, &sc.weights.K8,
                     &sc.weights.K9, &sc.weights.K10, &sc.weights.K11};
  for (int i = 0; i < 11; ++i) *slots[i] = detail::non_negative(w["K" + std::to_string(i + 1)]);
  if (!(sc.weights.K10 > 0.0)) w["K10"].fail("must be positive");
  sc.smooth_eps = detail::positive(root["smooth_eps"]);
  sc.optimize_footholds = root["foothold_optimization"].as<bool>();

  const Field ref = root["reference"];
  ref.require_keys({"target_height", "position_hold_gain"});
  sc.target_height = detail::positive(ref["target_height"]);
  sc.hold_gain = detail::non_negative(ref["position_hold_gain"]);
  sc.commands = detail::parse_commands(root["commands"]);

  const Field terrain = root["terrain"];
  terrain.require_keys({"gap", "gaps", "stones"});
  auto parse_gap = [&](const Field& g) {
    g.require_keys({"x", "half_width"});
    GapSpec spec{g["x"].as<double>(), g["half_width"].as<double>()};
    if (!(spec.half_width > 0.0)) g["half_width"].fail("gap half-width must be positive");
    sc.terrain.gaps.push_back(spec);
  };
  if (terrain["gap"].defined()) parse_gap(terrain["gap"]);
  for (std::size_t i = 0; i < terrain["gaps"].size(); ++i) parse_gap(terrain["gaps"][i]);
  const Field stones = terrain["stones"];
  stones.require_keys({"points", "grid", "radius"});
  StoneField field;
  field.radius = detail::positive(stones["radius"]);
  for (std::size_t i = 0; i < stones["points"].size(); ++i) {
    field.stones.push_back(stones["points"][i].vec3());
  }
  if (stones["grid"].defined()) {
    const Field grid = stones["grid"];
    grid.require_keys({"origin", "pitch", "count"});
    const Vector3 origin = grid["origin"].vec3();
    const double pitch = detail::positive(grid["pitch"]);
    const Field count = grid["count"];
    const Eigen::VectorXd n = count.vector(2);
    if (n[0] < 1 || n[1] < 1 || n[0] != std::floor(n[0]) || n[1] != std::floor(n[1])) {
      count.fail("expected two positive integers");
    }
    for (int i = 0; i < static_cast<int>(n[0]); ++i) {
      for (int j = 0; j < static_cast<int>(n[1]); ++j) {
        field.stones.push_back(origin + Vector3(i * pitch, j * pitch, 0.0));
      }
    }
  }
  for (std::size_t i = 0; i < field.stones.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if ((field.stones[i] - field.stones[j]).norm() < 1e-9) stones.fail("duplicate stone");
    }
  }
  if (!field.stones.empty()) sc.terrain.stones = std::move(field);

  const Field robots = root["robots"];
  const std::size_t robot_count = std::max<std::size_t>(1, robots.size());
  if (robot_count > 2) robots.fail("at most two robots are supported");
  for (std::size_t i = 0; i < robot_count; ++i) {
    const Field r = robots.size() ? robots[i] : Field(YAML::Node(YAML::NodeType::Map), "robots[0]", source);
    r.require_keys({"params", "position", "velocity", "yaw", "commands"});
    RobotSpec spec;
    const Field params = r["params"];
    if (params.defined() && params.node().IsMap()) {
      spec.params_source = "inline";
      spec.params = parse_robot_params(params);
    } else {
      const std::string name = params.get<std::string>("robots/a1.yaml");
      spec.params_source = detail::resolve_robot_file(name, source);
      try {
        spec.params = load_robot_params(spec.params_source);
      } catch (const ConfigError& e) {
        if (e.field().empty() && e.line() == 0) params.fail("cannot open robot file " + spec.params_source);
        throw;
      }
    }
    spec.position = r["position"].defined() ? Vector3(r["position"].vec3())
                                            : Vector3(0.0, 0.0, sc.target_height);
    if (!(spec.position.z() > 0.0)) r["position"].fail("base height must be positive");
    if (r["velocity"].defined()) spec.velocity = r["velocity"].vec3();
    spec.yaw = r["yaw"].get(0.0);
    spec.commands = detail::parse_commands(r["commands"]);
    sc.robots.push_back(std::move(spec));
  }

  const Field coll = root["collision"];
  coll.require_keys({"min_distance"});
  sc.min_distance = detail::positive(coll["min_distance"]);

  const Field dist = root["disturbances"];
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const Field d = dist[i];
    d.require_keys({"t", "impulse", "robot"});
    DisturbanceSpec spec;
    spec.t = d["t"].as<double>();
    if (!(spec.t >= 0.0 && spec.t <= sc.duration)) d["t"].fail("must lie within the duration");
    spec.impulse = d["impulse"].vec3();
    spec.robot = d["robot"].get(0);
    if (spec.robot < 0 || spec.robot >= static_cast<int>(sc.robots.size())) {
      d["robot"].fail("no such robot");
    }
    sc.disturbances.push_back(spec);
  }
  std::stable_sort(sc.disturbances.begin(), sc.disturbances.end(),
                   [](const DisturbanceSpec& a, const DisturbanceSpec& b) { return a.t < b.t; });

  const Field so = root["solver"];
  so.require_keys({"max_iterations", "gradient_tolerance", "step_tolerance", "levenberg_lambda",
                   "srbm_levenberg_lambda", "line_search_shrink", "line_search_min_step",
                   "armijo_c"});
  sc.solver.max_iterations = so["max_iterations"].as<int>();
  sc.solver.gradient_tolerance = so["gradient_tolerance"].as<double>();
  sc.solver.step_tolerance = so["step_tolerance"].as<double>();
  sc.ipm_levenberg_lambda = so["levenberg_lambda"].as<double>();
  sc.srbm_levenberg_lambda = so["srbm_levenberg_lambda"].as<double>();
  if (!(sc.srbm_levenberg_lambda >= 0.0)) so["srbm_levenberg_lambda"].fail("out of range");
  sc.solver.levenberg_lambda =
      sc.model == ModelKind::kSrbm ? sc.srbm_levenberg_lambda : sc.ipm_levenberg_lambda;
  sc.solver.line_search_shrink = so["line_search_shrink"].as<double>();
  sc.solver.line_search_min_step = so["line_search_min_step"].as<double>();
  sc.solver.armijo_c = so["armijo_c"].as<double>();
  try {
    sc.solver.validate();
  } catch (const std::invalid_argument& e) {
    const std::string field = std::string(e.what()).substr(std::string("solver.").size());
    so[field].fail("out of range");
  }

  const Field log = root["log"];
  log.require_keys({"record_timing"});
  sc.record_timing = log["record_timing"].as<bool>();
  return sc;
}

inline Scenario load_scenario_text(const std::string& text, const std::string& source,
                                   const std::vector<std::pair<std::string, std::string>>&
                                       overrides = {}) {
  const YAML::Node user = yaml::parse_text(text, source);
  if (user.IsDefined() && !user.IsNull() && !user.IsMap()) {
    throw ConfigError(source, "", yaml::line_of(user), "expected a mapping at top level");
  }
  return parse_scenario(resolve_scenario_tree(user, overrides), source, user,
                        detail::keys_of(overrides));
}

inline Scenario load_scenario(const std::string& path,
                              const std::vector<std::pair<std::string, std::string>>& overrides =
                                  {}) {
  const YAML::Node user = yaml::parse_file(path);
  if (user.IsDefined() && !user.IsNull() && !user.IsMap()) {
    throw ConfigError(path, "", yaml::line_of(user), "expected a mapping at top level");
  }
  return parse_scenario(resolve_scenario_tree(user, overrides), path, user,
                        detail::keys_of(overrides));
}

namespace detail {

inline void emit_vec(YAML::Emitter& e, const Eigen::VectorXd& v) {
  e << YAML::Flow << YAML::BeginSeq;
  for (Eigen::Index i = 0; i < v.size(); ++i) e << v[i];
  e << YAML::EndSeq;
}

inline void emit_commands(YAML::Emitter& e, const std::vector<CommandSegment>& cmds) {
  e << YAML::BeginSeq;
  for (const CommandSegment& c : cmds) {
    e << YAML::BeginMap << YAML::Key << "t" << YAML::Value << c.t;
    e << YAML::Key << "v_xy" << YAML::Value;
    emit_vec(e, c.v_xy);
    e << YAML::Key << "yaw_rate" << YAML::Value << c.yaw_rate;
    if (c.target_height) e << YAML::Key << "target_height" << YAML::Value << *c.target_height;
    e << YAML::EndMap;
  }
  e << YAML::EndSeq;
}

}  // namespace detail

/// Fully resolved scenario as YAML; robot parameters are inlined so the copy
/// is self-contained and loads back to the same scenario.
inline std::string scenario_to_yaml(const Scenario& sc) {
  using detail::emit_vec;
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "name" << YAML::Value << sc.name;
  e << YAML::Key << "model" << YAML::Value << to_string(sc.model);
  e << YAML::Key << "duration" << YAML::Value << sc.duration;
  e << YAML::Key << "seed" << YAML::Value << sc.seed;
  e << YAML::Key << "horizon" << YAML::Value << YAML::BeginMap << YAML::Key << "steps"
    << YAML::Value << sc.N << YAML::Key << "dt" << YAML::Value << sc.dt << YAML::EndMap;
  e << YAML::Key << "replan_period" << YAML::Value << sc.replan_period;
  e << YAML::Key << "gait" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "type" << YAML::Value << "custom";
  e << YAML::Key << "period" << YAML::Value << sc.gait.period;
  e << YAML::Key << "duty" << YAML::Value << sc.gait.duty;
  e << YAML::Key << "offsets" << YAML::Value;
  emit_vec(e, Eigen::Map<const Eigen::Vector4d>(sc.gait.offsets.data()));
  e << YAML::EndMap;
  const double w[] = {sc.weights.K1, sc.weights.K2, sc.weights.K3, sc.weights.K4,
                      sc.weights.K5, sc.weights.K6, sc.weights.K7, sc.weights.K8,
                      sc.weights.K9, sc.weights.K10, sc.weights.K11};
  e << YAML::Key << "weights" << YAML::Value << YAML::BeginMap;
  for (int i = 0; i < 11; ++i) e << YAML::Key << ("K" + std::to_string(i + 1)) << YAML::Value << w[i];
  e << YAML::EndMap;
  e << YAML::Key << "smooth_eps" << YAML::Value << sc.smooth_eps;
  e << YAML::Key << "foothold_optimization" << YAML::Value << sc.optimize_footholds;
  e << YAML::Key << "reference" << YAML::Value << YAML::BeginMap << YAML::Key << "target_height"
    << YAML::Value << sc.target_height << YAML::Key << "position_hold_gain" << YAML::Value
    << sc.hold_gain << YAML::EndMap;
  e << YAML::Key << "commands" << YAML::Value;
  detail::emit_commands(e, sc.commands);

  e << YAML::Key << "terrain" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "gaps" << YAML::Value << YAML::BeginSeq;
  for (const GapSpec& g : sc.terrain.gaps) {
    e << YAML::Flow << YAML::BeginMap << YAML::Key << "x" << YAML::Value << g.g_x << YAML::Key
      << "half_width" << YAML::Value << g.half_width << YAML::EndMap;
  }
  e << YAML::EndSeq;
  e << YAML::Key << "stones" << YAML::Value << YAML::BeginMap << YAML::Key << "points"
    << YAML::Value << YAML::BeginSeq;
  if (sc.terrain.stones) {
    for (const Vector3& t : sc.terrain.stones->stones) emit_vec(e, t);
  }
  e << YAML::EndSeq;
  e << YAML::Key << "radius" << YAML::Value
    << (sc.terrain.stones ? sc.terrain.stones->radius : StoneField{}.radius);
  e << YAML::EndMap << YAML::EndMap;

  e << YAML::Key << "robots" << YAML::Value << YAML::BeginSeq;
  for (const RobotSpec& r : sc.robots) {
    e << YAML::BeginMap << YAML::Key << "params" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "mass" << YAML::Value << r.params.mass;
    e << YAML::Key << "inertia" << YAML::Value;
    emit_vec(e, Eigen::Map<const Eigen::Matrix<double, 9, 1>>(
                    Eigen::Matrix<double, 3, 3, Eigen::RowMajor>(r.params.inertia_body).data()));
    e << YAML::Key << "gravity" << YAML::Value;
    emit_vec(e, r.params.gravity);
    e << YAML::Key << "hip_offsets" << YAML::Value << YAML::BeginSeq;
    for (const auto& h : r.params.hip_offsets) emit_vec(e, h);
    e << YAML::EndSeq << YAML::EndMap;
    e << YAML::Key << "position" << YAML::Value;
    emit_vec(e, r.position);
    e << YAML::Key << "velocity" << YAML::Value;
    emit_vec(e, r.velocity);
    e << YAML::Key << "yaw" << YAML::Value << r.yaw;
    e << YAML::Key << "commands" << YAML::Value;
    detail::emit_commands(e, r.commands);
    e << YAML::EndMap;
  }
  e << YAML::EndSeq;
  e << YAML::Key << "collision" << YAML::Value << YAML::BeginMap << YAML::Key << "min_distance"
    << YAML::Value << sc.min_distance << YAML::EndMap;
  e << YAML::Key << "disturbances" << YAML::Value << YAML::BeginSeq;
  for (const DisturbanceSpec& d : sc.disturbances) {
    e << YAML::BeginMap << YAML::Key << "t" << YAML::Value << d.t << YAML::Key << "impulse"
      << YAML::Value;
    emit_vec(e, d.impulse);
    e << YAML::Key << "robot" << YAML::Value << d.robot << YAML::EndMap;
  }
  e << YAML::EndSeq;
  const SolverOptions& s = sc.solver;
  e << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "max_iterations" << YAML::Value << s.max_iterations;
  e << YAML::Key << "gradient_tolerance" << YAML::Value << s.gradient_tolerance;
  e << YAML::Key << "step_tolerance" << YAML::Value << s.step_tolerance;
  e << YAML::Key << "levenberg_lambda" << YAML::Value << sc.ipm_levenberg_lambda;
  e << YAML::Key << "srbm_levenberg_lambda" << YAML::Value << sc.srbm_levenberg_lambda;
  e << YAML::Key << "line_search_shrink" << YAML::Value << s.line_search_shrink;
  e << YAML::Key << "line_search_min_step" << YAML::Value << s.line_search_min_step;
  e << YAML::Key << "armijo_c" << YAML::Value << s.armijo_c;
  e << YAML::EndMap;
  e << YAML::Key << "log" << YAML::Value << YAML::BeginMap << YAML::Key << "record_timing"
    << YAML::Value << sc.record_timing << YAML::EndMap;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

/// Appends gap, stone and collision terms the scenario calls for.
inline void add_scenario_costs(const Scenario& sc, LocomotionOcp& ocp) {
  if (!sc.terrain.gaps.empty() && sc.weights.K8 > 0.0) {
    ocp.costs.push_back(std::make_shared<GapCost>(sc.terrain.gaps, ocp.footholds, sc.weights.K8,
                                                  sc.smooth_eps));
  }
  if (sc.terrain.stones && sc.weights.K9 > 0.0) {
    ocp.costs.push_back(std::make_shared<SteppingStoneCost>(*sc.terrain.stones, ocp.footholds,
                                                            sc.weights.K9, sc.weights.K10));
  }
  if (ocp.robot_count() == 2 && sc.weights.K11 > 0.0) {
    ocp.costs.push_back(std::make_shared<CollisionCost>(ocp.layouts[0], ocp.layouts[1],
                                                        sc.weights.K11, sc.min_distance,
                                                        sc.smooth_eps));
  }
}

}  // namespace legmpc

#endif  // LEGMPC_SCENARIOS_SCENARIO_HPP_
