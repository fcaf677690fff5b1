#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "graphrl/agents.hpp"

namespace graphrl::cli {

// Everything `run` needs. Loaded from a flat `key = value` file; individual
// command-line flags overwrite fields afterwards. Keys mirror the flag names
// with '-' replaced by '_'.
struct RunConfig {
  std::string environment = "linear_build";
  std::string agent = "dce";  // dce | reinforce | ppo
  std::string invariant;      // registry name, required
  int order = 0;              // required
  std::uint64_t seed = 0;
  double target_score = 1e-4;
  std::uint64_t restart_every = 0;  // 0 = never restart
  std::uint64_t max_steps = 0;      // 0 = stop before the first step
  std::string out = ".";            // directory for scores.csv / solutions.txt

  // environment parameters
  int edge_colors = 2;
  bool directed = false;
  bool loops = false;
  std::string ordering = "row_major";  // row_major | clockwise
  std::uint64_t episode_length = 0;    // global/local environments only
  bool flip_only = false;
  int starting_vertex = 0;
  std::string generator;  // "" | uniform | bernoulli:<p>

  // agent hyperparameters
  std::uint64_t episodes = 0;  // 0 = agent default
  double learning_rate = 0.003;
  std::vector<int> hidden = {72, 12};
  double dropout = 0.2;
  double elite_fraction = 0.07;
  double carry_fraction = 0.06;
  double selection_fraction = 0.25;
  double discount = 0.95;
  bool baseline = true;
  std::uint64_t epochs = 4;
  double clip = 0.2;
  double value_coefficient = 0.5;
  double entropy_coefficient = 0.0;
  std::string random_action;  // "" | constant:<p> | linear:<a>,<b>,<steps> | exponential:<a>,<rate>
};

// Throws std::invalid_argument with the offending line number on bad input.
RunConfig parse_config_file(const std::string& path);
void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value);

// Resolves names against the registries and assembles the configured search
// stack. Throws std::invalid_argument on unknown names or bad parameters.
std::unique_ptr<GraphAgent> build_agent(const RunConfig& config);

// Subcommand drivers. Progress and verdicts go to `out`, diagnostics to
// `err`. Exit codes: 0 success, 1 target not reached or solutions invalid,
// 2 invalid input.
int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);
int check_command(const std::string& solutions_path, const std::string& invariant_name,
                  double target_score, std::ostream& out, std::ostream& err);
int convert_command(const std::string& input_path, const std::string& input_format,
                    const std::string& output_path, const std::string& output_format,
                    std::ostream& err);

}  // namespace graphrl::cli
