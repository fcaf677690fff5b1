#include "graphrl/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace graphrl {

namespace {

[[noreturn]] void fail(const std::string& message) { throw std::invalid_argument(message); }

// Stable log-softmax pieces for one row with an optional 0/1 mask.
struct MaskedRow {
  Eigen::VectorXd log_probs;
  Eigen::VectorXd probs;
};

MaskedRow masked_row(const Eigen::VectorXd& logits, const std::uint8_t* mask) {
  Eigen::Index n = logits.size();
  Eigen::VectorXd effective = logits;
  bool any = false;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (mask && !mask[j])
      effective[j] = -1e9;
    else
      any = true;
  }
  if (!any) fail("all actions are masked");
  double top = effective.maxCoeff();
  Eigen::VectorXd shifted = effective.array() - top;
  double total = shifted.array().exp().sum();
  MaskedRow row;
  row.log_probs = shifted.array() - std::log(total);
  row.probs = row.log_probs.array().exp();
  return row;
}

}  // namespace

PolicyNetwork::PolicyNetwork(std::vector<LayerSpec> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) fail("network needs at least one layer");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const LayerSpec& layer = layers_[i];
    if (layer.inputs < 1 || layer.outputs < 1) fail("layer sizes must be positive");
    if (layer.dropout < 0.0 || layer.dropout >= 1.0) fail("dropout must lie in [0, 1)");
    if (i > 0 && layers_[i - 1].outputs != layer.inputs)
      fail("layer " + std::to_string(i) + " expects " + std::to_string(layer.inputs) +
           " inputs but the previous layer produces " +
           std::to_string(layers_[i - 1].outputs));
  }
  for (const LayerSpec& layer : layers_) {
    weights_.emplace_back(Eigen::MatrixXd::Zero(layer.outputs, layer.inputs));
    biases_.emplace_back(Eigen::VectorXd::Zero(layer.outputs));
    weight_gradients_.emplace_back(Eigen::MatrixXd::Zero(layer.outputs, layer.inputs));
    bias_gradients_.emplace_back(Eigen::VectorXd::Zero(layer.outputs));
  }
  inputs_.resize(layers_.size());
  preactivations_.resize(layers_.size());
  dropout_masks_.resize(layers_.size());
}

void PolicyNetwork::initialize(std::mt19937_64& rng) {
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    double bound = std::sqrt(6.0 / (layers_[i].inputs + layers_[i].outputs));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Eigen::Index r = 0; r < weights_[i].rows(); ++r)
      for (Eigen::Index c = 0; c < weights_[i].cols(); ++c) weights_[i](r, c) = dist(rng);
    biases_[i].setZero();
  }
  zero_gradients();
  forward_ran_ = false;
}

void PolicyNetwork::zero_gradients() {
  for (auto& g : weight_gradients_) g.setZero();
  for (auto& g : bias_gradients_) g.setZero();
}

Eigen::MatrixXd PolicyNetwork::forward(const Eigen::MatrixXd& input, std::mt19937_64* rng) {
  if (input.cols() != input_size())
    fail("network expects " + std::to_string(input_size()) + " inputs, got " +
         std::to_string(input.cols()));
  Eigen::MatrixXd current = input;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    inputs_[i] = current;
    Eigen::MatrixXd z =
        (current * weights_[i].transpose()).rowwise() + biases_[i].transpose();
    preactivations_[i] = z;
    if (layers_[i].relu) z = z.cwiseMax(0.0);
    if (training_ && layers_[i].dropout > 0.0) {
      if (!rng) fail("training-mode forward with dropout needs an RNG");
      double keep = 1.0 - layers_[i].dropout;
      std::bernoulli_distribution coin(keep);
      Eigen::MatrixXd mask(z.rows(), z.cols());
      for (Eigen::Index r = 0; r < z.rows(); ++r)
        for (Eigen::Index c = 0; c < z.cols(); ++c)
          mask(r, c) = coin(*rng) ? 1.0 / keep : 0.0;
      dropout_masks_[i] = std::move(mask);
      z = z.cwiseProduct(dropout_masks_[i]);
    } else {
      dropout_masks_[i].resize(0, 0);
    }
    current = std::move(z);
  }
  forward_ran_ = true;
  return current;
}

void PolicyNetwork::backward(const Eigen::MatrixXd& logit_gradients) {
  if (!forward_ran_) throw std::logic_error("backward without a preceding forward pass");
  if (logit_gradients.rows() != preactivations_.back().rows() ||
      logit_gradients.cols() != output_size())
    fail("logit gradient shape does not match the last forward pass");
  Eigen::MatrixXd grad = logit_gradients;
  for (std::size_t idx = layers_.size(); idx-- > 0;) {
    if (dropout_masks_[idx].size() > 0) grad = grad.cwiseProduct(dropout_masks_[idx]);
    if (layers_[idx].relu)
      grad = grad.cwiseProduct(
          (preactivations_[idx].array() > 0.0).cast<double>().matrix());
    weight_gradients_[idx] += grad.transpose() * inputs_[idx];
    bias_gradients_[idx] += grad.colwise().sum().transpose();
    if (idx > 0) grad = grad * weights_[idx];
  }
}

AdamOptimizer::AdamOptimizer(double learning_rate, double beta1, double beta2,
                             double epsilon)
    : learning_rate_(learning_rate), beta1_(beta1), beta2_(beta2), epsilon_(epsilon) {
  if (learning_rate <= 0.0) fail("learning rate must be positive");
}

void AdamOptimizer::reset() {
  steps_ = 0;
  weight_m_.clear();
  weight_v_.clear();
  bias_m_.clear();
  bias_v_.clear();
}

void AdamOptimizer::step(PolicyNetwork& net) {
  auto& weights = net.weights();
  auto& biases = net.biases();
  if (weight_m_.empty()) {
    for (std::size_t i = 0; i < weights.size(); ++i) {
      weight_m_.emplace_back(Eigen::MatrixXd::Zero(weights[i].rows(), weights[i].cols()));
      weight_v_.emplace_back(Eigen::MatrixXd::Zero(weights[i].rows(), weights[i].cols()));
      bias_m_.emplace_back(Eigen::VectorXd::Zero(biases[i].size()));
      bias_v_.emplace_back(Eigen::VectorXd::Zero(biases[i].size()));
    }
  }
  if (weight_m_.size() != weights.size())
    fail("optimizer accumulators do not match the network");
  ++steps_;
  double correction1 = 1.0 - std::pow(beta1_, static_cast<double>(steps_));
  double correction2 = 1.0 - std::pow(beta2_, static_cast<double>(steps_));
  auto update = [&](auto& param, const auto& grad, auto& m, auto& v) {
    if (param.rows() != grad.rows() || param.cols() != grad.cols() ||
        param.rows() != m.rows() || param.cols() != m.cols())
      fail("optimizer accumulators do not match the network");
    m = beta1_ * m + (1.0 - beta1_) * grad;
    v = beta2_ * v + (1.0 - beta2_) * grad.cwiseProduct(grad);
    auto m_hat = (m / correction1).array();
    auto v_hat = (v / correction2).array();
    param.array() -= learning_rate_ * m_hat / (v_hat.sqrt() + epsilon_);
  };
  for (std::size_t i = 0; i < weights.size(); ++i) {
    update(weights[i], net.weight_gradients()[i], weight_m_[i], weight_v_[i]);
    update(biases[i], net.bias_gradients()[i], bias_m_[i], bias_v_[i]);
  }
}

Eigen::VectorXd masked_probabilities(const Eigen::VectorXd& logits,
                                     const std::uint8_t* mask) {
  return masked_row(logits, mask).probs;
}

Eigen::VectorXd masked_log_probabilities(const Eigen::VectorXd& logits,
                                         const std::uint8_t* mask) {
  return masked_row(logits, mask).log_probs;
}

int masked_sample(const Eigen::VectorXd& logits, const std::uint8_t* mask,
                  std::mt19937_64& rng) {
  Eigen::VectorXd probs = masked_probabilities(logits, mask);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  double u = dist(rng);
  double cumulative = 0.0;
  int fallback = -1;
  for (Eigen::Index j = 0; j < probs.size(); ++j) {
    if (mask && !mask[j]) continue;
    fallback = static_cast<int>(j);
    cumulative += probs[j];
    if (u < cumulative) return static_cast<int>(j);
  }
  return fallback;
}

std::vector<double> discounted_returns(const std::vector<double>& rewards, double gamma) {
  if (gamma < 0.0 || gamma > 1.0) fail("discount factor must lie in [0, 1]");
  std::vector<double> returns(rewards.size());
  double running = 0.0;
  for (std::size_t t = rewards.size(); t-- > 0;) {
    running = rewards[t] + gamma * running;
    returns[t] = running;
  }
  return returns;
}

double cross_entropy_loss(PolicyNetwork& net, const Eigen::MatrixXd& states,
                          const std::vector<int>& actions, std::mt19937_64* rng) {
  Eigen::Index rows = states.rows();
  if (static_cast<Eigen::Index>(actions.size()) != rows)
    fail("one action per state row required");
  Eigen::MatrixXd logits = net.forward(states, rng);
  Eigen::MatrixXd grads(rows, logits.cols());
  double loss = 0.0;
  double scale = 1.0 / static_cast<double>(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    int a = actions[static_cast<std::size_t>(i)];
    if (a < 0 || a >= logits.cols()) fail("action index out of range");
    MaskedRow row = masked_row(logits.row(i).transpose(), nullptr);
    loss -= row.log_probs[a] * scale;
    Eigen::VectorXd g = row.probs * scale;
    g[a] -= scale;
    grads.row(i) = g.transpose();
  }
  net.backward(grads);
  return loss;
}

double reinforce_loss(PolicyNetwork& net, const Eigen::MatrixXd& states,
                      const std::vector<int>& actions, const std::uint8_t* masks,
                      const std::vector<double>& advantages, std::mt19937_64* rng) {
  Eigen::Index rows = states.rows();
  if (static_cast<Eigen::Index>(actions.size()) != rows ||
      static_cast<Eigen::Index>(advantages.size()) != rows)
    fail("states, actions, and advantages must agree in length");
  Eigen::MatrixXd logits = net.forward(states, rng);
  std::size_t q = static_cast<std::size_t>(logits.cols());
  Eigen::MatrixXd grads(rows, logits.cols());
  double loss = 0.0;
  double scale = 1.0 / static_cast<double>(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    int a = actions[static_cast<std::size_t>(i)];
    if (a < 0 || a >= logits.cols()) fail("action index out of range");
    const std::uint8_t* mask = masks ? masks + static_cast<std::size_t>(i) * q : nullptr;
    MaskedRow row = masked_row(logits.row(i).transpose(), mask);
    double w = advantages[static_cast<std::size_t>(i)];
    loss -= w * row.log_probs[a] * scale;
    Eigen::VectorXd g = row.probs * (w * scale);
    g[a] -= w * scale;
    grads.row(i) = g.transpose();
  }
  net.backward(grads);
  return loss;
}

double ppo_total_loss(PolicyNetwork& policy, PolicyNetwork& value,
                      const Eigen::MatrixXd& states, const std::vector<int>& actions,
                      const std::uint8_t* masks,
                      const std::vector<double>& old_log_probs,
                      const std::vector<double>& advantages,
                      const std::vector<double>& returns, const PPOLossConfig& config,
                      std::mt19937_64* rng) {
  Eigen::Index rows = states.rows();
  if (static_cast<Eigen::Index>(actions.size()) != rows ||
      static_cast<Eigen::Index>(old_log_probs.size()) != rows ||
      static_cast<Eigen::Index>(advantages.size()) != rows ||
      static_cast<Eigen::Index>(returns.size()) != rows)
    fail("per-row inputs must agree in length");
  if (value.output_size() != 1) fail("value network must produce one output");
  if (config.clip < 0.0) fail("clip coefficient must be nonnegative");

  Eigen::MatrixXd logits = policy.forward(states, rng);
  Eigen::MatrixXd values = value.forward(states, rng);
  std::size_t q = static_cast<std::size_t>(logits.cols());
  Eigen::MatrixXd policy_grads = Eigen::MatrixXd::Zero(rows, logits.cols());
  Eigen::MatrixXd value_grads(rows, 1);
  double scale = 1.0 / static_cast<double>(rows);
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    std::size_t s = static_cast<std::size_t>(i);
    int a = actions[s];
    if (a < 0 || a >= logits.cols()) fail("action index out of range");
    const std::uint8_t* mask = masks ? masks + s * q : nullptr;
    MaskedRow row = masked_row(logits.row(i).transpose(), mask);
    double ratio = std::exp(row.log_probs[a] - old_log_probs[s]);
    double adv = advantages[s];
    double unclipped = ratio * adv;
    double clipped = std::clamp(ratio, 1.0 - config.clip, 1.0 + config.clip) * adv;
    policy_loss -= std::min(unclipped, clipped) * scale;
    // The objective only moves where the unclipped branch is active.
    if (unclipped <= clipped) {
      double coefficient = -scale * adv * ratio;  // d(loss)/d(new log-prob)
      Eigen::VectorXd g = row.probs * (-coefficient);
      g[a] += coefficient;
      policy_grads.row(i) += g.transpose();
    }
    if (config.entropy_coefficient != 0.0) {
      double h = 0.0;
      for (Eigen::Index j = 0; j < row.probs.size(); ++j)
        if (row.probs[j] > 0.0) h -= row.probs[j] * row.log_probs[j];
      entropy += h * scale;
      for (Eigen::Index j = 0; j < row.probs.size(); ++j)
        if (row.probs[j] > 0.0)
          policy_grads(i, j) +=
              config.entropy_coefficient * scale * row.probs[j] * (row.log_probs[j] + h);
    }
    double err = values(i, 0) - returns[s];
    value_loss += err * err * scale;
    value_grads(i, 0) = config.value_coefficient * 2.0 * err * scale;
  }
  policy.backward(policy_grads);
  value.backward(value_grads);
  return policy_loss + config.value_coefficient * value_loss -
         config.entropy_coefficient * entropy;
}

}  // namespace graphrl
