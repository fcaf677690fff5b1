#include "graphrl/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "graphrl/environment.hpp"
#include "graphrl/invariants.hpp"
#include "graphrl/serialization.hpp"

namespace graphrl::cli {
namespace {

[[noreturn]] void fail(const std::string& message) { throw std::invalid_argument(message); }

std::string trim(const std::string& text) {
  auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  fail("expected a boolean (true/false/1/0), got '" + value + "'");
}

double parse_number(const std::string& value) {
  std::size_t used = 0;
  double parsed = 0.0;
  try {
    parsed = std::stod(value, &used);
  } catch (const std::exception&) {
    fail("expected a number, got '" + value + "'");
  }
  if (used != value.size()) fail("expected a number, got '" + value + "'");
  return parsed;
}

std::uint64_t parse_count(const std::string& value) {
  if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos)
    fail("expected a nonnegative integer, got '" + value + "'");
  try {
    return std::stoull(value);
  } catch (const std::exception&) {
    fail("integer out of range: '" + value + "'");
  }
}

int parse_small_count(const std::string& value) {
  std::uint64_t parsed = parse_count(value);
  if (parsed > std::numeric_limits<int>::max()) fail("integer out of range: '" + value + "'");
  return static_cast<int>(parsed);
}

std::vector<int> parse_int_list(const std::string& value) {
  std::vector<int> sizes;
  std::string remaining = value;
  while (!remaining.empty()) {
    auto comma = remaining.find(',');
    sizes.push_back(parse_small_count(trim(remaining.substr(0, comma))));
    if (comma == std::string::npos) break;
    remaining = remaining.substr(comma + 1);
  }
  return sizes;
}

// Splits "name:arg1,arg2" into the name and its argument list.
std::pair<std::string, std::vector<std::string>> parse_spec(const std::string& value) {
  auto colon = value.find(':');
  std::string name = trim(value.substr(0, colon));
  std::vector<std::string> arguments;
  if (colon != std::string::npos) {
    std::string rest = value.substr(colon + 1);
    while (true) {
      auto comma = rest.find(',');
      arguments.push_back(trim(rest.substr(0, comma)));
      if (comma == std::string::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  return {std::move(name), std::move(arguments)};
}

RandomActionMechanism parse_random_action(const std::string& value) {
  if (value.empty()) return {};
  auto [name, arguments] = parse_spec(value);
  if (name == "constant" && arguments.size() == 1)
    return RandomActionMechanism::constant(parse_number(arguments[0]));
  if (name == "linear" && arguments.size() == 3)
    return RandomActionMechanism::linear_decay(parse_number(arguments[0]),
                                               parse_number(arguments[1]),
                                               parse_count(arguments[2]));
  if (name == "exponential" && arguments.size() == 2)
    return RandomActionMechanism::exponential_decay(parse_number(arguments[0]),
                                                    parse_number(arguments[1]));
  fail("bad random_action '" + value +
       "' (want constant:<p>, linear:<a>,<b>,<steps>, or exponential:<a>,<rate>)");
}

std::unique_ptr<GraphEnvironment> build_environment(const RunConfig& config,
                                                    const Invariant& invariant) {
  if (config.order < 1) fail("order must be positive");
  GraphKind kind{config.directed, config.loops};

  EdgeOrdering ordering = EdgeOrdering::RowMajor;
  if (config.ordering == "clockwise")
    ordering = EdgeOrdering::Clockwise;
  else if (config.ordering != "row_major")
    fail("ordering must be row_major or clockwise, got '" + config.ordering + "'");

  GraphGenerator generator;
  if (!config.generator.empty()) {
    auto [name, arguments] = parse_spec(config.generator);
    if (name == "uniform" && arguments.empty())
      generator = uniform_random_generator(config.edge_colors, kind, config.order,
                                           config.seed + 1);
    else if (name == "bernoulli" && arguments.size() == 1)
      generator = bernoulli_graph_generator(kind, config.order, parse_number(arguments[0]),
                                            config.seed + 1);
    else
      fail("unknown generator '" + config.generator + "' (want uniform or bernoulli:<p>)");
  }

  const std::string& name = config.environment;
  bool linear = name == "linear_build" || name == "linear_set" || name == "linear_flip";
  bool global = name == "global_set" || name == "global_flip";
  bool local = name == "local_set" || name == "local_flip";
  if (!linear && !global && !local) fail("unknown environment '" + name + "'");

  if (linear) {
    if (config.episode_length) fail("episode_length applies to global and local environments");
    if (config.flip_only) fail("flip_only applies to global and local flip environments");
    if (config.starting_vertex) fail("starting_vertex applies to local environments");
    LinearOptions options{invariant, config.order, config.edge_colors, kind, ordering,
                          {},        generator};
    if (name == "linear_build") return linear_build_environment(std::move(options));
    if (name == "linear_set") return linear_set_environment(std::move(options));
    return linear_flip_environment(std::move(options));
  }
  if (!config.episode_length) fail("global and local environments need an episode_length");
  if (global) {
    if (config.starting_vertex) fail("starting_vertex applies to local environments");
    GlobalOptions options{invariant,  config.order,          config.edge_colors,
                          kind,       ordering,              {},
                          generator,  config.episode_length, config.flip_only};
    if (name == "global_set") return global_set_environment(std::move(options));
    return global_flip_environment(std::move(options));
  }
  LocalOptions options{invariant,  config.order,          config.edge_colors,
                       kind,       ordering,              {},
                       generator,  config.episode_length, config.flip_only,
                       config.starting_vertex};
  if (name == "local_set") return local_set_environment(std::move(options));
  return local_flip_environment(std::move(options));
}

void fill_base_options(AgentOptionsBase& options, const RunConfig& config,
                       std::vector<LayerSpec> layers) {
  options.policy_layers = std::move(layers);
  options.learning_rate = config.learning_rate;
  options.episode_count = config.episodes;
  options.random_actions = parse_random_action(config.random_action);
  options.seed = config.seed;
}

// Full-precision text for the score columns: enough digits to round-trip a
// float32 score exactly, and identical runs print identical bytes.
std::string format_number(double value) {
  std::ostringstream out;
  out << std::setprecision(9) << value;
  return out.str();
}

}  // namespace

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read config file '" + path + "'");
  RunConfig config;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string entry = trim(line);
    if (entry.empty()) continue;
    auto equals = entry.find('=');
    if (equals == std::string::npos)
      fail("config line " + std::to_string(line_number) + ": expected key = value");
    std::string key = trim(entry.substr(0, equals));
    std::string value = trim(entry.substr(equals + 1));
    if (key.empty()) fail("config line " + std::to_string(line_number) + ": missing key");
    try {
      apply_config_entry(config, key, value);
    } catch (const std::exception& e) {
      fail("config line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return config;
}

void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value) {
  if (key == "env") config.environment = value;
  else if (key == "agent") config.agent = value;
  else if (key == "invariant") config.invariant = value;
  else if (key == "order") config.order = parse_small_count(value);
  else if (key == "seed") config.seed = parse_count(value);
  else if (key == "target_score") config.target_score = parse_number(value);
  else if (key == "restart_every") config.restart_every = parse_count(value);
  else if (key == "max_steps") config.max_steps = parse_count(value);
  else if (key == "out") config.out = value;
  else if (key == "edge_colors") config.edge_colors = parse_small_count(value);
  else if (key == "directed") config.directed = parse_bool(value);
  else if (key == "loops") config.loops = parse_bool(value);
  else if (key == "ordering") config.ordering = value;
  else if (key == "episode_length") config.episode_length = parse_count(value);
  else if (key == "flip_only") config.flip_only = parse_bool(value);
  else if (key == "starting_vertex") config.starting_vertex = parse_small_count(value);
  else if (key == "generator") config.generator = value;
  else if (key == "episodes") config.episodes = parse_count(value);
  else if (key == "learning_rate") config.learning_rate = parse_number(value);
  else if (key == "hidden") config.hidden = parse_int_list(value);
  else if (key == "dropout") config.dropout = parse_number(value);
  else if (key == "elite_fraction") config.elite_fraction = parse_number(value);
  else if (key == "carry_fraction") config.carry_fraction = parse_number(value);
  else if (key == "selection_fraction") config.selection_fraction = parse_number(value);
  else if (key == "discount") config.discount = parse_number(value);
  else if (key == "baseline") config.baseline = parse_bool(value);
  else if (key == "epochs") config.epochs = parse_count(value);
  else if (key == "clip") config.clip = parse_number(value);
  else if (key == "value_coefficient") config.value_coefficient = parse_number(value);
  else if (key == "entropy_coefficient") config.entropy_coefficient = parse_number(value);
  else if (key == "random_action") config.random_action = value;
  else fail("unknown config key '" + key + "'");
}

std::unique_ptr<GraphAgent> build_agent(const RunConfig& config) {
  Invariant invariant = InvariantRegistry::instance().lookup(config.invariant);
  auto environment = build_environment(config, invariant);

  std::vector<LayerSpec> layers;
  if (!config.hidden.empty()) {
    int inputs = static_cast<int>(environment->state_length());
    for (int width : config.hidden) {
      if (width < 1) fail("hidden layer sizes must be positive");
      layers.push_back({inputs, width, true, config.dropout});
      inputs = width;
    }
    layers.push_back({inputs, environment->action_number(), false, 0.0});
  }

  if (config.agent == "dce") {
    DeepCrossEntropyOptions options;
    fill_base_options(options, config, std::move(layers));
    options.elite_fraction = config.elite_fraction;
    options.carry_fraction = config.carry_fraction;
    return std::make_unique<DeepCrossEntropyAgent>(std::move(environment), std::move(options));
  }
  if (config.agent == "reinforce" || config.agent == "ppo") {
    ReinforceOptions shared;
    fill_base_options(shared, config, std::move(layers));
    shared.selection_fraction = config.selection_fraction;
    shared.discount = config.discount;
    shared.baseline = config.baseline;
    if (config.agent == "reinforce")
      return std::make_unique<ReinforceAgent>(std::move(environment), std::move(shared));
    PPOOptions options;
    static_cast<ReinforceOptions&>(options) = std::move(shared);
    options.epochs = config.epochs;
    options.clip = config.clip;
    options.value_coefficient = config.value_coefficient;
    options.entropy_coefficient = config.entropy_coefficient;
    return std::make_unique<PPOAgent>(std::move(environment), std::move(options));
  }
  fail("unknown agent '" + config.agent + "' (want dce, reinforce, or ppo)");
}

int run_command(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::unique_ptr<GraphAgent> agent;
  Invariant invariant;
  try {
    agent = build_agent(config);
    invariant = InvariantRegistry::instance().lookup(config.invariant);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  std::filesystem::path directory(config.out);
  std::error_code ignored;
  std::filesystem::create_directories(directory, ignored);
  std::ofstream scores(directory / "scores.csv");
  std::ofstream solutions(directory / "solutions.txt");
  if (!scores || !solutions) {
    err << "error: cannot write into '" << config.out << "'\n";
    return 2;
  }
  scores << "step,best_score,generation_mean,elapsed_ms\n";

  double best_score = -std::numeric_limits<double>::infinity();
  std::optional<EdgeColoredGraph> best_graph;
  auto started = std::chrono::steady_clock::now();

  for (std::uint64_t step = 1; step <= config.max_steps; ++step) {
    agent->step();
    if (agent->has_best_graph() && agent->best_score() > best_score) {
      best_score = agent->best_score();
      best_graph = agent->best_graph();
    }
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();
    scores << step << ',' << format_number(best_score) << ','
           << format_number(agent->generation_mean()) << ',' << elapsed << '\n';
    scores.flush();

    if (best_graph && best_score > config.target_score) {
      // Confirm the candidate through the invariant itself before emitting;
      // the checker must agree with the run that produced the line.
      ScoreVector confirmed = invariant.f(*best_graph);
      if (!confirmed.empty() && static_cast<double>(confirmed[0]) > config.target_score) {
        solutions << to_bitmask_line(*best_graph) << '\n';
        out << "success: score " << format_number(static_cast<double>(confirmed[0]))
            << " at step " << step << '\n';
        return 0;
      }
    }
    if (config.restart_every && agent->step_count() >= config.restart_every &&
        step < config.max_steps) {
      agent->reset();
      out << "restarting at step " << step << '\n';
    }
  }
  out << "target not reached after " << config.max_steps << " steps; best score "
      << format_number(best_score) << '\n';
  return 1;
}

int check_command(const std::string& solutions_path, const std::string& invariant_name,
                  double target_score, std::ostream& out, std::ostream& err) {
  Invariant invariant;
  try {
    invariant = InvariantRegistry::instance().lookup(invariant_name);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  std::ifstream in(solutions_path);
  if (!in) {
    err << "error: cannot read '" << solutions_path << "'\n";
    return 2;
  }

  std::string line;
  std::size_t line_number = 0, checked = 0, valid = 0;
  bool all_valid = true;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++checked;
    std::optional<EdgeColoredGraph> graph;
    try {
      graph.emplace(parse_bitmask_line(line));
    } catch (const std::exception& e) {
      out << "line " << line_number << ": parse error: " << e.what() << '\n';
      all_valid = false;
      continue;
    }
    try {
      ScoreVector scored = invariant.f(*graph);
      double score = scored.empty() ? -std::numeric_limits<double>::infinity()
                                    : static_cast<double>(scored[0]);
      bool ok = score > target_score;
      out << "line " << line_number << (ok ? ": valid" : ": invalid")
          << " score=" << format_number(score) << '\n';
      if (ok)
        ++valid;
      else
        all_valid = false;
    } catch (const std::exception& e) {
      out << "line " << line_number << ": invalid (" << e.what() << ")\n";
      all_valid = false;
    }
  }
  out << valid << '/' << checked << " valid\n";
  return all_valid ? 0 : 1;
}

int convert_command(const std::string& input_path, const std::string& input_format,
                    const std::string& output_path, const std::string& output_format,
                    std::ostream& err) {
  try {
    GraphFormat from = parse_format_name(input_format);
    GraphFormat to = parse_format_name(output_format);
    std::ifstream in(input_path);
    if (!in) fail("cannot read '" + input_path + "'");
    EdgeColoredGraph graph = read_graph_file(in, from);
    std::ofstream out(output_path);
    if (!out) fail("cannot write '" + output_path + "'");
    write_graph_file(out, graph, to);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace graphrl::cli
