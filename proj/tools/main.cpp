#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>

#include "graphrl/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"counterexample search over edge-colored graphs"};
  app.require_subcommand(1);
  int rc = 0;

  auto* run = app.add_subcommand("run", "run a configured search");
  std::string config_path;
  run->add_option("--config", config_path, "flat key = value config file")->required();
  std::uint64_t seed = 0, restart_every = 0, max_steps = 0;
  int order = 0;
  double target_score = 0.0;
  std::string invariant, environment, agent_name, out_dir;
  auto* seed_flag = run->add_option("--seed", seed, "RNG seed");
  auto* order_flag = run->add_option("--order", order, "graph order n");
  auto* invariant_flag = run->add_option("--invariant", invariant, "registry invariant name");
  auto* env_flag = run->add_option("--env", environment, "environment name");
  auto* agent_flag = run->add_option("--agent", agent_name, "agent name (dce/reinforce/ppo)");
  auto* target_flag = run->add_option("--target-score", target_score, "success threshold");
  auto* restart_flag =
      run->add_option("--restart-every", restart_every, "agent reset period in steps");
  auto* max_flag = run->add_option("--max-steps", max_steps, "hard step limit");
  auto* out_flag = run->add_option("--out", out_dir, "output directory");
  run->callback([&] {
    auto config = graphrl::cli::parse_config_file(config_path);
    if (seed_flag->count()) config.seed = seed;
    if (order_flag->count()) config.order = order;
    if (invariant_flag->count()) config.invariant = invariant;
    if (env_flag->count()) config.environment = environment;
    if (agent_flag->count()) config.agent = agent_name;
    if (target_flag->count()) config.target_score = target_score;
    if (restart_flag->count()) config.restart_every = restart_every;
    if (max_flag->count()) config.max_steps = max_steps;
    if (out_flag->count()) config.out = out_dir;
    rc = graphrl::cli::run_command(config, std::cout, std::cerr);
  });

  auto* check = app.add_subcommand("check", "verify a solution file line by line");
  std::string solutions_path, check_invariant;
  double check_target = 1e-4;
  check->add_option("--solutions", solutions_path, "bitmask-line solution file")->required();
  check->add_option("--invariant", check_invariant, "registry invariant name")->required();
  check->add_option("--target-score", check_target, "validity threshold");
  check->callback([&] {
    rc = graphrl::cli::check_command(solutions_path, check_invariant, check_target, std::cout,
                                     std::cerr);
  });

  auto* convert = app.add_subcommand("convert", "re-encode a graph file");
  std::string in_path, in_format, out_path, out_format;
  convert->add_option("--in", in_path, "input file")->required();
  convert->add_option("--in-format", in_format, "input format name")->required();
  convert->add_option("--out", out_path, "output file")->required();
  convert->add_option("--out-format", out_format, "output format name")->required();
  convert->callback([&] {
    rc = graphrl::cli::convert_command(in_path, in_format, out_path, out_format, std::cerr);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return rc;
}
