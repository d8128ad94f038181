/* Copyright 2026 The qoc-magnus Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qoc/cli.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::string out;
  std::string format = "text";
  int order = 0;        // 0: keep config value
  int knots = 0;
  int relax_order = 0;
  double tol = 0.0;
};

void add_common(CLI::App* cmd, CommonArgs* args, bool needs_config) {
  auto* c = cmd->add_option("--config", args->config, "problem config (JSON)");
  if (needs_config) c->required();
  cmd->add_option("--out", args->out, "output file or directory");
  cmd->add_option("--order", args->order, "override Magnus truncation order (1..4)");
  cmd->add_option("--knots", args->knots, "override knot count K");
  cmd->add_option("--relax-order", args->relax_order, "override relaxation order r");
  cmd->add_option("--tol", args->tol, "override solver tolerance");
  cmd->add_option("--format", args->format, "report format")
      ->check(CLI::IsMember({"text", "json"}));
}

qoc::cli::ProblemConfig load_with_overrides(const CommonArgs& args) {
  qoc::cli::ProblemConfig cfg = qoc::cli::load_config(args.config);
  if (args.order > 0) cfg.magnus_order = args.order;
  if (args.relax_order > 0) cfg.relax_order = args.relax_order;
  if (args.tol > 0) cfg.solver_tol = args.tol;
  if (args.knots > 0 && cfg.has_system && args.knots != cfg.system.knots) {
    const double horizon = cfg.system.horizon();
    cfg.system.knots = args.knots;
    cfg.system.dt = horizon / args.knots;
    for (auto& row : cfg.bounds) {
      row.assign(args.knots, row.front());  // re-broadcast the first pair
    }
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum optimal control bounds via truncated generator expansions and "
               "moment relaxations"};
  app.require_subcommand(1);

  CommonArgs check_args, build_args, solve_args, verify_args, oracle_args;
  std::string pulses_path;
  double oracle_a = 0, oracle_b = 0, oracle_T = 0;
  int oracle_terms = 0;

  auto* check = app.add_subcommand("check", "controllability and convergence-bound checks");
  add_common(check, &check_args, true);

  auto* build = app.add_subcommand("build", "write the relaxation in SDPA sparse format");
  add_common(build, &build_args, true);

  auto* solve = app.add_subcommand("solve", "solve the relaxation and extract a pulse");
  add_common(solve, &solve_args, true);

  auto* verify = app.add_subcommand("verify", "compare truncation orders against propagation");
  add_common(verify, &verify_args, true);
  verify->add_option("--pulses", pulses_path, "pulse grid CSV (control,knot,value)")
      ->required();

  auto* oracle = app.add_subcommand("oracle", "closed-form linear-driving series diagnostics");
  add_common(oracle, &oracle_args, false);
  auto* opt_a = oracle->add_option("--a", oracle_a, "constant drift amplitude");
  auto* opt_b = oracle->add_option("--b", oracle_b, "drive ramp slope");
  auto* opt_t = oracle->add_option("--T", oracle_T, "horizon");
  auto* opt_terms = oracle->add_option("--terms", oracle_terms, "series terms (0..5)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) {
      auto cfg = load_with_overrides(check_args);
      return qoc::cli::cmd_check(cfg, {check_args.format, check_args.out}, std::cout);
    }
    if (build->parsed()) {
      auto cfg = load_with_overrides(build_args);
      return qoc::cli::cmd_build(cfg, {build_args.format, build_args.out}, std::cout);
    }
    if (solve->parsed()) {
      auto cfg = load_with_overrides(solve_args);
      return qoc::cli::cmd_solve(cfg, {solve_args.format, solve_args.out}, std::cout);
    }
    if (verify->parsed()) {
      auto cfg = load_with_overrides(verify_args);
      return qoc::cli::cmd_verify(cfg, pulses_path, {verify_args.format, verify_args.out},
                                  std::cout);
    }
    if (oracle->parsed()) {
      qoc::cli::OracleParams params;
      if (!oracle_args.config.empty()) {
        auto cfg = qoc::cli::load_config(oracle_args.config);
        if (!cfg.oracle) {
          throw qoc::cli::ConfigError("oracle: config has no 'oracle' section");
        }
        params = *cfg.oracle;
      }
      if (opt_a->count()) params.drift = oracle_a;
      if (opt_b->count()) params.ramp = oracle_b;
      if (opt_t->count()) params.horizon = oracle_T;
      if (opt_terms->count()) params.terms = oracle_terms;
      return qoc::cli::cmd_oracle(params, {oracle_args.format, oracle_args.out}, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
