#include "graphrl/agents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace graphrl {

namespace {

[[noreturn]] void fail(const std::string& message) { throw std::invalid_argument(message); }

Eigen::MatrixXd to_matrix(const U8Array& states) {
  Eigen::Index rows = static_cast<Eigen::Index>(states.shape[0]);
  Eigen::Index cols = static_cast<Eigen::Index>(states.shape[1]);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = states.data[static_cast<std::size_t>(r * cols + c)];
  return m;
}

std::vector<LayerSpec> default_policy_layers(int inputs, int outputs) {
  return {{inputs, 72, true, 0.2}, {72, 12, true, 0.2}, {12, outputs, false, 0.0}};
}

// Highest score first; on ties fresh episodes (larger marker) before carried.
struct PoolEntry {
  float score;
  int marker;  // fresh episode index b, or -1-j for carried episode j
};

bool pool_order(const PoolEntry& a, const PoolEntry& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.marker > b.marker;
}

std::vector<std::size_t> top_episodes(const ScoreVector& finals, double fraction) {
  std::vector<std::size_t> order(finals.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (finals[a] != finals[b]) return finals[a] > finals[b];
    return a < b;
  });
  std::size_t count = static_cast<std::size_t>(
      std::max<long long>(1, std::llround(fraction * static_cast<double>(finals.size()))));
  order.resize(std::min(count, order.size()));
  return order;
}

}  // namespace

RandomActionMechanism::RandomActionMechanism() : kind_(Kind::Constant) {}

RandomActionMechanism RandomActionMechanism::constant(double probability) {
  if (probability < 0.0 || probability > 1.0) fail("probability must lie in [0, 1]");
  RandomActionMechanism m;
  m.kind_ = Kind::Constant;
  m.start_ = probability;
  return m;
}

RandomActionMechanism RandomActionMechanism::linear_decay(double start, double end,
                                                          std::size_t steps) {
  if (start < 0.0 || start > 1.0 || end < 0.0 || end > 1.0)
    fail("probability must lie in [0, 1]");
  if (steps < 1) fail("decay steps must be positive");
  RandomActionMechanism m;
  m.kind_ = Kind::LinearDecay;
  m.start_ = start;
  m.end_ = end;
  m.steps_ = steps;
  return m;
}

RandomActionMechanism RandomActionMechanism::exponential_decay(double start, double rate) {
  if (start < 0.0 || start > 1.0) fail("probability must lie in [0, 1]");
  if (rate <= 0.0 || rate > 1.0) fail("decay rate must lie in (0, 1]");
  RandomActionMechanism m;
  m.kind_ = Kind::ExponentialDecay;
  m.start_ = start;
  m.rate_ = rate;
  return m;
}

double RandomActionMechanism::probability() const {
  switch (kind_) {
    case Kind::Constant:
      return start_;
    case Kind::LinearDecay: {
      double progress =
          static_cast<double>(std::min(iteration_, steps_)) / static_cast<double>(steps_);
      return start_ + (end_ - start_) * progress;
    }
    case Kind::ExponentialDecay:
      return start_ * std::pow(rate_, static_cast<double>(iteration_));
  }
  return 0.0;
}

GraphAgent::GraphAgent(std::unique_ptr<GraphEnvironment> environment,
                       AgentOptionsBase options, std::size_t default_episodes,
                       bool sparse)
    : environment_(std::move(environment)),
      policy_layers_(std::move(options.policy_layers)),
      episode_count_(options.episode_count == 0 ? default_episodes
                                                : options.episode_count),
      random_actions_(options.random_actions),
      rng_(options.seed),
      best_score_(-std::numeric_limits<double>::infinity()),
      generation_mean_(std::numeric_limits<double>::quiet_NaN()) {
  if (!environment_) fail("agent needs an environment");
  int state_length = static_cast<int>(environment_->state_length());
  int actions = environment_->action_number();
  if (policy_layers_.empty()) policy_layers_ = default_policy_layers(state_length, actions);
  if (policy_layers_.front().inputs != state_length)
    fail("policy network input size must equal the environment state length");
  if (policy_layers_.back().outputs != actions)
    fail("policy network output size must equal the environment action number");
  CommunicationSetting setting = environment_->setting();
  setting.sparse = sparse;
  environment_->set_setting(std::move(setting));
}

void GraphAgent::reset() {
  step_count_ = 0;
  best_score_ = -std::numeric_limits<double>::infinity();
  best_graph_.reset();
  generation_mean_ = std::numeric_limits<double>::quiet_NaN();
  random_actions_.reset();
  reinitialize();
}

void GraphAgent::step() {
  learn_once();
  random_actions_.advance();
  ++step_count_;
}

const EdgeColoredGraph& GraphAgent::best_graph() const {
  if (!best_graph_) throw std::logic_error("no graph has been scored yet");
  return *best_graph_;
}

void GraphAgent::consider(const U8Array& states, const ScoreVector& scores) {
  std::size_t length = states.shape[1];
  for (std::size_t b = 0; b < scores.size(); ++b) {
    if (scores[b] > best_score_) {
      best_score_ = scores[b];
      U8Array row({1, length});
      std::copy_n(states.data.begin() + static_cast<std::ptrdiff_t>(b * length), length,
                  row.data.begin());
      best_graph_ = environment_->state_batch_to_graph_batch(row).select(0);
    }
  }
}

void GraphAgent::set_generation_mean(const ScoreVector& final_scores) {
  double sum = 0.0;
  for (float s : final_scores) sum += s;
  generation_mean_ = sum / static_cast<double>(final_scores.size());
}

PolicyNetwork GraphAgent::make_policy_network() const {
  return PolicyNetwork(policy_layers_);
}

GraphAgent::Rollout GraphAgent::run_episodes(PolicyNetwork& policy) {
  policy.set_training(false);
  GraphEnvironment& env = *environment_;
  Rollout rollout;
  StepResult result = env.reset_batch(episode_count_);
  rollout.states.push_back(result.states);
  rollout.scores.push_back(result.scores);
  if (result.scores) consider(result.states, *result.scores);

  double p_random = random_actions_.probability();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t q = static_cast<std::size_t>(env.action_number());
  for (std::size_t t = 0; t < env.episode_length(); ++t) {
    U8Array mask = env.action_mask();
    Eigen::MatrixXd logits = policy.forward(to_matrix(rollout.states.back()));
    std::vector<std::int32_t> actions(episode_count_);
    std::vector<double> log_probs(episode_count_);
    for (std::size_t b = 0; b < episode_count_; ++b) {
      const std::uint8_t* mask_row = mask.data.data() + b * q;
      Eigen::VectorXd row = logits.row(static_cast<Eigen::Index>(b)).transpose();
      int action;
      if (unit(rng_) < p_random) {
        int available = 0;
        for (std::size_t j = 0; j < q; ++j) available += mask_row[j] ? 1 : 0;
        if (available == 0) fail("all actions are masked");
        std::uniform_int_distribution<int> pick(0, available - 1);
        int wanted = pick(rng_);
        action = -1;
        for (std::size_t j = 0; j < q; ++j) {
          if (!mask_row[j]) continue;
          if (wanted-- == 0) {
            action = static_cast<int>(j);
            break;
          }
        }
      } else {
        action = masked_sample(row, mask_row, rng_);
      }
      actions[b] = action;
      log_probs[b] = masked_log_probabilities(row, mask_row)[action];
    }
    rollout.masks.push_back(std::move(mask));
    result = env.step_batch(actions);
    rollout.actions.push_back(std::move(actions));
    rollout.log_probs.push_back(std::move(log_probs));
    rollout.states.push_back(result.states);
    rollout.scores.push_back(result.scores);
    if (result.scores) consider(result.states, *result.scores);
  }
  return rollout;
}

DeepCrossEntropyAgent::DeepCrossEntropyAgent(std::unique_ptr<GraphEnvironment> environment,
                                             DeepCrossEntropyOptions options)
    : GraphAgent(std::move(environment), options, 1000, /*sparse=*/true),
      options_(options),
      policy_(make_policy_network()),
      optimizer_(options.learning_rate) {
  if (options_.elite_fraction <= 0.0 || options_.elite_fraction > 1.0)
    fail("elite fraction must lie in (0, 1]");
  if (options_.carry_fraction < 0.0 || options_.carry_fraction >= 1.0)
    fail("carry fraction must lie in [0, 1)");
  reset();
}

void DeepCrossEntropyAgent::reinitialize() {
  policy_.initialize(rng());
  optimizer_.reset();
  carried_.clear();
}

void DeepCrossEntropyAgent::learn_once() {
  Rollout rollout = run_episodes(policy_);
  if (!rollout.scores.back())
    throw std::logic_error("sparse environment returned no final scores");
  const ScoreVector& finals = *rollout.scores.back();
  set_generation_mean(finals);

  std::vector<PoolEntry> pool;
  pool.reserve(finals.size() + carried_.size());
  for (std::size_t b = 0; b < finals.size(); ++b)
    pool.push_back({finals[b], static_cast<int>(b)});
  for (std::size_t j = 0; j < carried_.size(); ++j)
    pool.push_back({carried_[j].score, -1 - static_cast<int>(j)});
  std::sort(pool.begin(), pool.end(), pool_order);

  std::size_t elite_count = static_cast<std::size_t>(std::max<long long>(
      1, std::llround(options_.elite_fraction * static_cast<double>(pool.size()))));
  elite_count = std::min(elite_count, pool.size());
  std::size_t carry_count = std::min<std::size_t>(
      static_cast<std::size_t>(std::max<long long>(
          0, std::llround(options_.carry_fraction * static_cast<double>(pool.size())))),
      pool.size());

  std::size_t steps = rollout.actions.size();
  std::size_t length = environment().state_length();
  auto episode_row = [&](const PoolEntry& entry,
                         std::size_t t) -> std::pair<const std::uint8_t*, std::int32_t> {
    if (entry.marker >= 0) {
      std::size_t b = static_cast<std::size_t>(entry.marker);
      return {rollout.states[t].data.data() + b * length, rollout.actions[t][b]};
    }
    const CarriedEpisode& episode = carried_[static_cast<std::size_t>(-1 - entry.marker)];
    return {episode.states.data() + t * length, episode.actions[t]};
  };

  if (steps > 0) {
    Eigen::Index rows = static_cast<Eigen::Index>(elite_count * steps);
    Eigen::MatrixXd states(rows, static_cast<Eigen::Index>(length));
    std::vector<int> actions(static_cast<std::size_t>(rows));
    Eigen::Index r = 0;
    for (std::size_t i = 0; i < elite_count; ++i)
      for (std::size_t t = 0; t < steps; ++t) {
        auto [row, action] = episode_row(pool[i], t);
        for (std::size_t c = 0; c < length; ++c)
          states(r, static_cast<Eigen::Index>(c)) = row[c];
        actions[static_cast<std::size_t>(r)] = action;
        ++r;
      }
    policy_.set_training(true);
    policy_.zero_gradients();
    cross_entropy_loss(policy_, states, actions, &rng());
    optimizer_.step(policy_);
    policy_.set_training(false);
  }

  std::vector<CarriedEpisode> next;
  next.reserve(carry_count);
  for (std::size_t i = 0; i < carry_count; ++i) {
    if (pool[i].marker < 0) {
      next.push_back(std::move(carried_[static_cast<std::size_t>(-1 - pool[i].marker)]));
      continue;
    }
    CarriedEpisode episode;
    episode.score = pool[i].score;
    episode.states.resize(steps * length);
    episode.actions.resize(steps);
    for (std::size_t t = 0; t < steps; ++t) {
      auto [row, action] = episode_row(pool[i], t);
      std::copy_n(row, length, episode.states.begin() + static_cast<std::ptrdiff_t>(t * length));
      episode.actions[t] = action;
    }
    next.push_back(std::move(episode));
  }
  carried_ = std::move(next);
}

ReinforceAgent::ReinforceAgent(std::unique_ptr<GraphEnvironment> environment,
                               ReinforceOptions options)
    : GraphAgent(std::move(environment), options, 256, /*sparse=*/false),
      options_(options),
      policy_(make_policy_network()),
      optimizer_(options.learning_rate) {
  if (options_.selection_fraction <= 0.0 || options_.selection_fraction > 1.0)
    fail("selection fraction must lie in (0, 1]");
  if (options_.discount < 0.0 || options_.discount > 1.0)
    fail("discount factor must lie in [0, 1]");
  reset();
}

void ReinforceAgent::reinitialize() {
  policy_.initialize(rng());
  optimizer_.reset();
}

void ReinforceAgent::learn_once() {
  Rollout rollout = run_episodes(policy_);
  std::size_t steps = rollout.actions.size();
  std::size_t n = episode_count();
  const ScoreVector& finals = *rollout.scores.back();
  set_generation_mean(finals);

  // G_t per episode from rewards r_t = f_t - f_{t-1} (f_{-1} = reset score).
  std::vector<std::vector<double>> returns(n);
  for (std::size_t b = 0; b < n; ++b) {
    std::vector<double> rewards(steps);
    for (std::size_t t = 0; t < steps; ++t)
      rewards[t] = static_cast<double>((*rollout.scores[t + 1])[b]) -
                   static_cast<double>((*rollout.scores[t])[b]);
    returns[b] = discounted_returns(rewards, options_.discount);
  }

  std::vector<std::size_t> selected = top_episodes(finals, options_.selection_fraction);
  std::vector<double> baseline(steps, 0.0);
  if (options_.baseline) {
    for (std::size_t t = 0; t < steps; ++t) {
      double sum = 0.0;
      for (std::size_t b : selected) sum += returns[b][t];
      baseline[t] = sum / static_cast<double>(selected.size());
    }
  }

  std::size_t q = static_cast<std::size_t>(environment().action_number());
  std::size_t length = environment().state_length();
  Eigen::Index rows = static_cast<Eigen::Index>(selected.size() * steps);
  Eigen::MatrixXd states(rows, static_cast<Eigen::Index>(length));
  std::vector<int> actions(static_cast<std::size_t>(rows));
  std::vector<double> advantages(static_cast<std::size_t>(rows));
  std::vector<std::uint8_t> masks(static_cast<std::size_t>(rows) * q);
  Eigen::Index r = 0;
  for (std::size_t b : selected)
    for (std::size_t t = 0; t < steps; ++t) {
      const std::uint8_t* row = rollout.states[t].data.data() + b * length;
      for (std::size_t c = 0; c < length; ++c)
        states(r, static_cast<Eigen::Index>(c)) = row[c];
      actions[static_cast<std::size_t>(r)] = rollout.actions[t][b];
      advantages[static_cast<std::size_t>(r)] = returns[b][t] - baseline[t];
      std::copy_n(rollout.masks[t].data.begin() + static_cast<std::ptrdiff_t>(b * q), q,
                  masks.begin() + static_cast<std::ptrdiff_t>(r) * static_cast<std::ptrdiff_t>(q));
      ++r;
    }

  policy_.set_training(true);
  policy_.zero_gradients();
  reinforce_loss(policy_, states, actions, masks.data(), advantages, &rng());
  optimizer_.step(policy_);
  policy_.set_training(false);
}

PPOAgent::PPOAgent(std::unique_ptr<GraphEnvironment> environment, PPOOptions options)
    : GraphAgent(std::move(environment), options, 256, /*sparse=*/false),
      options_(options),
      policy_(make_policy_network()),
      value_([&] {
        if (options_.value_layers.empty()) {
          std::vector<LayerSpec> layers = policy_.layers();
          layers.back().outputs = 1;
          return PolicyNetwork(layers);
        }
        return PolicyNetwork(options_.value_layers);
      }()),
      policy_optimizer_(options.learning_rate),
      value_optimizer_(options.learning_rate) {
  if (options_.selection_fraction <= 0.0 || options_.selection_fraction > 1.0)
    fail("selection fraction must lie in (0, 1]");
  if (options_.discount < 0.0 || options_.discount > 1.0)
    fail("discount factor must lie in [0, 1]");
  if (options_.epochs < 1) fail("epoch count must be positive");
  if (options_.clip < 0.0) fail("clip coefficient must be nonnegative");
  if (options_.value_coefficient < 0.0) fail("value coefficient must be nonnegative");
  if (options_.entropy_coefficient < 0.0) fail("entropy coefficient must be nonnegative");
  if (value_.input_size() != static_cast<int>(GraphAgent::environment().state_length()))
    fail("value network input size must equal the environment state length");
  if (value_.output_size() != 1) fail("value network must end in a single output");
  reset();
}

void PPOAgent::reinitialize() {
  policy_.initialize(rng());
  value_.initialize(rng());
  policy_optimizer_.reset();
  value_optimizer_.reset();
}

void PPOAgent::learn_once() {
  Rollout rollout = run_episodes(policy_);
  std::size_t steps = rollout.actions.size();
  std::size_t n = episode_count();
  const ScoreVector& finals = *rollout.scores.back();
  set_generation_mean(finals);

  std::vector<std::vector<double>> returns(n);
  for (std::size_t b = 0; b < n; ++b) {
    std::vector<double> rewards(steps);
    for (std::size_t t = 0; t < steps; ++t)
      rewards[t] = static_cast<double>((*rollout.scores[t + 1])[b]) -
                   static_cast<double>((*rollout.scores[t])[b]);
    returns[b] = discounted_returns(rewards, options_.discount);
  }

  std::vector<std::size_t> selected = top_episodes(finals, options_.selection_fraction);
  std::size_t q = static_cast<std::size_t>(environment().action_number());
  std::size_t length = environment().state_length();
  Eigen::Index rows = static_cast<Eigen::Index>(selected.size() * steps);
  Eigen::MatrixXd states(rows, static_cast<Eigen::Index>(length));
  std::vector<int> actions(static_cast<std::size_t>(rows));
  std::vector<double> old_log_probs(static_cast<std::size_t>(rows));
  std::vector<double> targets(static_cast<std::size_t>(rows));
  std::vector<std::uint8_t> masks(static_cast<std::size_t>(rows) * q);
  Eigen::Index r = 0;
  for (std::size_t b : selected)
    for (std::size_t t = 0; t < steps; ++t) {
      const std::uint8_t* row = rollout.states[t].data.data() + b * length;
      for (std::size_t c = 0; c < length; ++c)
        states(r, static_cast<Eigen::Index>(c)) = row[c];
      std::size_t s = static_cast<std::size_t>(r);
      actions[s] = rollout.actions[t][b];
      old_log_probs[s] = rollout.log_probs[t][b];
      targets[s] = returns[b][t];
      std::copy_n(rollout.masks[t].data.begin() + static_cast<std::ptrdiff_t>(b * q), q,
                  masks.begin() + static_cast<std::ptrdiff_t>(s * q));
      ++r;
    }

  // Advantages against the pre-update value estimates, normalized.
  value_.set_training(false);
  Eigen::MatrixXd estimates = value_.forward(states);
  std::vector<double> advantages(static_cast<std::size_t>(rows));
  double mean = 0.0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    advantages[static_cast<std::size_t>(i)] =
        targets[static_cast<std::size_t>(i)] - estimates(i, 0);
    mean += advantages[static_cast<std::size_t>(i)];
  }
  mean /= static_cast<double>(rows);
  double variance = 0.0;
  for (double a : advantages) variance += (a - mean) * (a - mean);
  variance /= static_cast<double>(rows);
  double deviation = std::sqrt(variance);
  for (double& a : advantages) a = (a - mean) / (deviation + 1e-8);

  PPOLossConfig config;
  config.clip = options_.clip;
  config.value_coefficient = options_.value_coefficient;
  config.entropy_coefficient = options_.entropy_coefficient;
  for (std::size_t epoch = 0; epoch < options_.epochs; ++epoch) {
    policy_.set_training(true);
    value_.set_training(true);
    policy_.zero_gradients();
    value_.zero_gradients();
    ppo_total_loss(policy_, value_, states, actions, masks.data(), old_log_probs,
                   advantages, targets, config, &rng());
    policy_optimizer_.step(policy_);
    value_optimizer_.step(value_);
  }
  policy_.set_training(false);
  value_.set_training(false);
}

}  // namespace graphrl
