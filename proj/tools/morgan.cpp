#include <CLI11.hpp>

#include <iostream>

#include "morgan/cli.hpp"

int main(int argc, char** argv) {
  using namespace morgan::cli;
  CLI::App app{"Exact solver for diagonal decoupling by singular state feedback"};
  app.require_subcommand(1);

  bool as_json = false;
  std::string system_path, solution_path;

  auto* analyze = app.add_subcommand("analyze", "controllability indices and the finite search space");
  analyze->add_option("system", system_path, "system file (JSON with A, B, C)")->required();
  analyze->add_flag("--json", as_json, "machine-readable output");

  SolveCommand cmd;
  auto* solve = app.add_subcommand("solve", "search for a decoupling pair (F, G)");
  solve->add_option("system", cmd.system_path, "system file")->required();
  solve->add_option("--seed", cmd.seed, "seed for all randomized rank tests")->capture_default_str();
  solve->add_flag("--all", cmd.all, "collect every feasible configuration");
  solve->add_option("--diag-polys", cmd.diag_polys, "closed-loop diagonal denominators, e.g. \"s+1;s^2+2s+1\"");
  solve->add_option("--dz-target", cmd.dz_target, "input decoupling zero polynomial, e.g. \"s^2+3s+2\"");
  solve->add_option("--out", cmd.out_path, "write the solution file here");
  solve->add_option("--jobs", cmd.jobs, "worker threads")->check(CLI::PositiveNumber);
  solve->add_option("--tuple", cmd.tuple, "only this closed-loop index tuple, e.g. 2,2,3");
  solve->add_option("--config", cmd.positions, "only feedback rows at these s-positions, e.g. 1,5");
  solve->add_flag("--json", cmd.as_json, "print the solution file to stdout");

  auto* verify = app.add_subcommand("verify", "recompute the closed loop of a solution file");
  verify->add_option("system", system_path, "system file")->required();
  verify->add_option("solution", solution_path, "solution file (needs F and G)")->required();
  verify->add_flag("--json", as_json, "machine-readable output");

  auto* fixed = app.add_subcommand("fixed-poles", "fixed-pole report of a solution file");
  fixed->add_option("system", system_path, "system file")->required();
  fixed->add_option("solution", solution_path, "solution file")->required();
  fixed->add_flag("--json", as_json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  if (*analyze) return run_analyze(system_path, as_json, std::cout, std::cerr);
  if (*solve) return run_solve(cmd, std::cout, std::cerr);
  if (*verify) return run_verify(system_path, solution_path, as_json, std::cout, std::cerr);
  return run_fixed_poles(system_path, solution_path, as_json, std::cout, std::cerr);
}
