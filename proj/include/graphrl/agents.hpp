#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "graphrl/environment.hpp"
#include "graphrl/graph.hpp"
#include "graphrl/network.hpp"

namespace graphrl {

// Probability that an agent replaces the policy's action with a uniformly
// random available one. advance() moves the schedule forward by one learning
// iteration.
class RandomActionMechanism {
 public:
  RandomActionMechanism();  // Constant(0)

  static RandomActionMechanism constant(double probability);
  static RandomActionMechanism linear_decay(double start, double end, std::size_t steps);
  static RandomActionMechanism exponential_decay(double start, double rate);

  double probability() const;
  void advance() { ++iteration_; }
  void reset() { iteration_ = 0; }

 private:
  enum class Kind { Constant, LinearDecay, ExponentialDecay };
  Kind kind_;
  double start_ = 0.0;
  double end_ = 0.0;
  double rate_ = 1.0;
  std::size_t steps_ = 1;
  std::size_t iteration_ = 0;
};

// Shared knobs. An empty policy_layers means the default architecture:
// state_length -> 72 -> 12 -> action_number with ReLU and dropout 0.2 on the
// hidden layers (the architecture of the worked examples). When given, the
// layer chain must start at state_length and end at action_number.
struct AgentOptionsBase {
  std::vector<LayerSpec> policy_layers;
  double learning_rate = 0.003;
  std::size_t episode_count = 0;  // 0 means the per-agent default
  RandomActionMechanism random_actions;
  std::uint64_t seed = 0;
};

struct DeepCrossEntropyOptions : AgentOptionsBase {
  double elite_fraction = 0.07;
  double carry_fraction = 0.06;
};

struct ReinforceOptions : AgentOptionsBase {
  double selection_fraction = 0.25;
  double discount = 0.95;
  bool baseline = true;
};

struct PPOOptions : ReinforceOptions {
  std::vector<LayerSpec> value_layers;  // empty: policy architecture, output 1
  std::size_t epochs = 4;
  double clip = 0.2;
  double value_coefficient = 0.5;
  double entropy_coefficient = 0.0;
};

// An agent owns its environment and one seeded RNG stream. Within a learning
// iteration the stream is consumed in a fixed order: rollout draws first (per
// step, per episode: the random-action coin, then the sample it decides),
// then training draws (dropout masks per forward pass). Rollouts run the
// networks in evaluation mode; training passes run them in training mode.
class GraphAgent {
 public:
  virtual ~GraphAgent() = default;
  GraphAgent(const GraphAgent&) = delete;
  GraphAgent& operator=(const GraphAgent&) = delete;

  // Reinitializes networks and optimizer state from the continuing RNG
  // stream and zeroes step_count; best_score falls back to -infinity.
  void reset();
  // One learning iteration.
  void step();

  std::size_t step_count() const { return step_count_; }
  double best_score() const { return best_score_; }
  // Throws std::logic_error before the first scored graph.
  const EdgeColoredGraph& best_graph() const;
  bool has_best_graph() const { return best_graph_.has_value(); }
  // Mean final invariant value of the most recent generation (NaN before
  // the first step()).
  double generation_mean() const { return generation_mean_; }

  GraphEnvironment& environment() { return *environment_; }
  const GraphEnvironment& environment() const { return *environment_; }

 protected:
  GraphAgent(std::unique_ptr<GraphEnvironment> environment, AgentOptionsBase options,
             std::size_t default_episodes, bool sparse);

  virtual void reinitialize() = 0;
  virtual void learn_once() = 0;

  // One batch of episodes sampled from `policy` in evaluation mode.
  struct Rollout {
    std::vector<U8Array> states;                       // per step incl. reset
    std::vector<U8Array> masks;                        // per decision step
    std::vector<std::vector<std::int32_t>> actions;    // per decision step
    std::vector<std::vector<double>> log_probs;        // of the taken actions
    std::vector<std::optional<ScoreVector>> scores;    // as the env reported
  };
  Rollout run_episodes(PolicyNetwork& policy);

  // Tracks best_score/best_graph over one reported (states, scores) pair.
  void consider(const U8Array& states, const ScoreVector& scores);
  void set_generation_mean(const ScoreVector& final_scores);

  PolicyNetwork make_policy_network() const;
  std::size_t episode_count() const { return episode_count_; }
  std::mt19937_64& rng() { return rng_; }
  RandomActionMechanism& random_actions() { return random_actions_; }

 private:
  std::unique_ptr<GraphEnvironment> environment_;
  std::vector<LayerSpec> policy_layers_;
  std::size_t episode_count_;
  RandomActionMechanism random_actions_;
  std::mt19937_64 rng_;

  std::size_t step_count_ = 0;
  double best_score_;
  std::optional<EdgeColoredGraph> best_graph_;
  double generation_mean_;
};

// Plays generations of parallel episodes under the sparse setting, trains on
// the elite fraction with cross-entropy against their taken actions, and
// carries the top fraction forward into the next generation's selection pool,
// where the carried trajectories compete (and train) again without being
// re-simulated.
class DeepCrossEntropyAgent final : public GraphAgent {
 public:
  DeepCrossEntropyAgent(std::unique_ptr<GraphEnvironment> environment,
                        DeepCrossEntropyOptions options = {});

 protected:
  void reinitialize() override;
  void learn_once() override;

 private:
  struct CarriedEpisode {
    float score;
    std::vector<std::uint8_t> states;  // episode_length * state_length rows
    std::vector<std::int32_t> actions;
  };

  DeepCrossEntropyOptions options_;
  PolicyNetwork policy_;
  AdamOptimizer optimizer_;
  std::vector<CarriedEpisode> carried_;
};

// Policy gradient over dense per-step invariant deltas with discounted
// returns and an optional per-step mean baseline over the selected episodes.
class ReinforceAgent final : public GraphAgent {
 public:
  ReinforceAgent(std::unique_ptr<GraphEnvironment> environment,
                 ReinforceOptions options = {});

 protected:
  void reinitialize() override;
  void learn_once() override;

 private:
  ReinforceOptions options_;
  PolicyNetwork policy_;
  AdamOptimizer optimizer_;
};

// Clipped-ratio policy optimization with a value network; several epochs per
// generation against frozen rollout log-probabilities.
class PPOAgent final : public GraphAgent {
 public:
  PPOAgent(std::unique_ptr<GraphEnvironment> environment, PPOOptions options = {});

 protected:
  void reinitialize() override;
  void learn_once() override;

 private:
  PPOOptions options_;
  PolicyNetwork policy_;
  PolicyNetwork value_;
  AdamOptimizer policy_optimizer_;
  AdamOptimizer value_optimizer_;
};

}  // namespace graphrl
