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

// legmpc: run scenarios, check derivatives, benchmark solves.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "legmpc/app/commands.hpp"

namespace {

void add_scenario_flags(CLI::App* cmd, legmpc::app::RunConfig& cfg,
                        std::vector<std::string>& sets) {
  cmd->add_option("--scenario", cfg.scenario, "Scenario file")->required();
  cmd->add_option("--set", sets, "Override KEY=VALUE (repeatable)");
  cmd->add_option("--seed", cfg.seed, "Scenario seed");
  cmd->add_option("--model", cfg.model, "Model: ipm or srbm");
}

}  // namespace

int main(int argc, char** argv) {
  namespace app = legmpc::app;
  CLI::App cli{"Foothold and base trajectory MPC for quadrupeds"};
  cli.require_subcommand(1);

  app::RunConfig run_cfg;
  std::vector<std::string> run_sets;
  CLI::App* run = cli.add_subcommand("run", "Simulate a scenario and write logs");
  add_scenario_flags(run, run_cfg, run_sets);
  run->add_option("--out", run_cfg.out_dir, "Output directory");

  app::CheckConfig check_cfg;
  CLI::App* check = cli.add_subcommand("check-gradients", "Finite-difference derivative oracles");
  check->add_option("--model", check_cfg.model, "ipm, srbm or all");
  check->add_option("--trials", check_cfg.trials, "Random instances per model");
  check->add_option("--tol", check_cfg.tol, "Maximum relative error");
  check->add_option("--seed", check_cfg.seed, "Seed of the instance generator");

  app::RunConfig bench_cfg;
  std::vector<std::string> bench_sets;
  int reps = 20;
  CLI::App* bench = cli.add_subcommand("bench", "Time cold and warm solves");
  add_scenario_flags(bench, bench_cfg, bench_sets);
  bench->add_option("--reps", reps, "Repetitions");
  bench->add_option("--out", bench_cfg.out_dir, "Output directory");

  app::RunConfig validate_cfg;
  std::vector<std::string> validate_sets;
  CLI::App* validate = cli.add_subcommand("validate", "Load and check a scenario file");
  add_scenario_flags(validate, validate_cfg, validate_sets);

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : app::kExitFailure;
  }

  auto collect = [](const std::vector<std::string>& sets, app::RunConfig& cfg) {
    for (const auto& s : sets) cfg.overrides.push_back(app::parse_override(s));
  };
  try {
    if (*run) {
      collect(run_sets, run_cfg);
      return app::cmd_run(run_cfg);
    }
    if (*check) return app::cmd_check_gradients(check_cfg);
    if (*bench) {
      collect(bench_sets, bench_cfg);
      return app::cmd_bench(bench_cfg, reps);
    }
    if (*validate) {
      collect(validate_sets, validate_cfg);
      return app::cmd_validate(validate_cfg);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return app::kExitFailure;
  }
  return app::kExitFailure;
}
