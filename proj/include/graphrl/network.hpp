#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

namespace graphrl {

struct LayerSpec {
  int inputs = 0;
  int outputs = 0;
  bool relu = false;
  double dropout = 0.0;  // [0, 1); active in training mode, inverted scaling
};

// Dense feed-forward stack with manual backpropagation. Rows of every matrix
// are batch elements. Dropout masks are drawn during forward() in training
// mode and stay fixed until the next forward pass, so backward() returns the
// exact gradients of the sampled network.
class PolicyNetwork {
 public:
  explicit PolicyNetwork(std::vector<LayerSpec> layers);

  int input_size() const { return layers_.front().inputs; }
  int output_size() const { return layers_.back().outputs; }
  const std::vector<LayerSpec>& layers() const { return layers_; }

  void set_training(bool training) { training_ = training; }
  bool training() const { return training_; }

  // Uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases.
  void initialize(std::mt19937_64& rng);

  // rng is required in training mode when any layer has dropout.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& input, std::mt19937_64* rng = nullptr);
  // Accumulates d(loss)/d(parameters) given d(loss)/d(logits) of the most
  // recent forward() call.
  void backward(const Eigen::MatrixXd& logit_gradients);

  std::vector<Eigen::MatrixXd>& weights() { return weights_; }
  std::vector<Eigen::VectorXd>& biases() { return biases_; }
  std::vector<Eigen::MatrixXd>& weight_gradients() { return weight_gradients_; }
  std::vector<Eigen::VectorXd>& bias_gradients() { return bias_gradients_; }
  void zero_gradients();

 private:
  std::vector<LayerSpec> layers_;
  std::vector<Eigen::MatrixXd> weights_;  // (outputs, inputs) per layer
  std::vector<Eigen::VectorXd> biases_;
  std::vector<Eigen::MatrixXd> weight_gradients_;
  std::vector<Eigen::VectorXd> bias_gradients_;
  bool training_ = false;

  // Forward-pass cache for backward().
  std::vector<Eigen::MatrixXd> inputs_;          // input to each layer
  std::vector<Eigen::MatrixXd> preactivations_;  // z = x W^T + b
  std::vector<Eigen::MatrixXd> dropout_masks_;   // already scaled by 1/(1-p)
  bool forward_ran_ = false;
};

// Bias-corrected adaptive-moment updates; accumulators are created lazily on
// the first step and must keep matching the network afterwards.
class AdamOptimizer {
 public:
  explicit AdamOptimizer(double learning_rate = 0.003, double beta1 = 0.9,
                         double beta2 = 0.999, double epsilon = 1e-8);

  // Applies the network's accumulated gradients and advances the counter.
  void step(PolicyNetwork& net);
  // Drops all moment accumulators and the step counter.
  void reset();

  double learning_rate() const { return learning_rate_; }

 private:
  double learning_rate_;
  double beta1_;
  double beta2_;
  double epsilon_;
  std::size_t steps_ = 0;
  std::vector<Eigen::MatrixXd> weight_m_, weight_v_;
  std::vector<Eigen::VectorXd> bias_m_, bias_v_;
};

// Masked categorical over one logit row: masked entries (mask byte 0) get an
// effective logit of -1e9 before a max-shifted softmax. mask may be null
// (everything available). Throws std::invalid_argument if all entries are
// masked.
Eigen::VectorXd masked_probabilities(const Eigen::VectorXd& logits,
                                     const std::uint8_t* mask);
Eigen::VectorXd masked_log_probabilities(const Eigen::VectorXd& logits,
                                         const std::uint8_t* mask);
int masked_sample(const Eigen::VectorXd& logits, const std::uint8_t* mask,
                  std::mt19937_64& rng);

// G_t = sum_j gamma^j r_{t+j}.
std::vector<double> discounted_returns(const std::vector<double>& rewards, double gamma);

// Training losses. Each runs one forward pass on `net` (honoring its mode),
// backpropagates, accumulates parameter gradients, and returns the scalar
// loss. `masks`, when non-null, holds one 0/1 row of net.output_size() bytes
// per batch row.

// Mean cross-entropy of the logits against the taken actions.
double cross_entropy_loss(PolicyNetwork& net, const Eigen::MatrixXd& states,
                          const std::vector<int>& actions,
                          std::mt19937_64* rng = nullptr);

// -mean_i advantage_i * log pi(action_i | state_i).
double reinforce_loss(PolicyNetwork& net, const Eigen::MatrixXd& states,
                      const std::vector<int>& actions, const std::uint8_t* masks,
                      const std::vector<double>& advantages,
                      std::mt19937_64* rng = nullptr);

struct PPOLossConfig {
  double clip = 0.2;
  double value_coefficient = 0.5;
  double entropy_coefficient = 0.0;
};

// Clipped-ratio policy loss + value_coefficient * squared value error
// - entropy_coefficient * mean entropy. Backpropagates through both networks.
double ppo_total_loss(PolicyNetwork& policy, PolicyNetwork& value,
                      const Eigen::MatrixXd& states, const std::vector<int>& actions,
                      const std::uint8_t* masks,
                      const std::vector<double>& old_log_probs,
                      const std::vector<double>& advantages,
                      const std::vector<double>& returns, const PPOLossConfig& config,
                      std::mt19937_64* rng = nullptr);

}  // namespace graphrl
