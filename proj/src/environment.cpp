#include "graphrl/environment.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

#include "graphrl/families.hpp"

namespace graphrl {

namespace {

[[noreturn]] void fail(const std::string& message) { throw std::invalid_argument(message); }

void check_environment_basics(const Invariant& graph_invariant, int order, int edge_colors) {
  if (!graph_invariant.f) fail("graph invariant function must be set");
  if (order < 2) fail("graph order must be at least 2");
  if (edge_colors < 2 || edge_colors > 254) fail("edge colors must be in 2..254");
}

void check_flip_colors(int edge_colors) {
  if (edge_colors != 2) fail("flip environments use exactly two edge colors");
}

}  // namespace

// ---- graph generators ----

GraphGenerator fixed_graph_generator(EdgeColoredGraph graph) {
  if (graph.batch_size()) fail("fixed generator takes a single graph, not a batch");
  if (!graph.is_fully_colored()) fail("fixed generator requires a fully colored graph");
  return [graph](std::size_t batch_size) {
    return EdgeColoredGraph::stack(std::vector<EdgeColoredGraph>(batch_size, graph));
  };
}

GraphGenerator uniform_random_generator(int edge_colors, GraphKind kind, int order,
                                        std::uint64_t seed) {
  if (edge_colors < 2 || edge_colors > 254) fail("edge colors must be in 2..254");
  if (order < 1) fail("graph order must be positive");
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return [=](std::size_t batch_size) {
    std::uniform_int_distribution<int> color(0, edge_colors - 1);
    std::size_t nn = static_cast<std::size_t>(order) * order;
    U8Array m({batch_size, static_cast<std::size_t>(order), static_cast<std::size_t>(order)});
    for (std::size_t b = 0; b < batch_size; ++b)
      for (int u = 0; u < order; ++u)
        for (int v = u; v < order; ++v) {
          if (!kind.allow_loops && u == v) continue;
          auto c = static_cast<std::uint8_t>(color(*rng));
          m.data[b * nn + static_cast<std::size_t>(u) * order + v] = c;
          if (kind.is_directed && u != v)
            m.data[b * nn + static_cast<std::size_t>(v) * order + u] =
                static_cast<std::uint8_t>(color(*rng));
          else if (u != v)
            m.data[b * nn + static_cast<std::size_t>(v) * order + u] = c;
        }
    return make_graph(GraphFormat::AdjacencyColors, std::move(m), edge_colors, kind);
  };
}

GraphGenerator bernoulli_graph_generator(GraphKind kind, int order, double edge_probability,
                                         std::uint64_t seed) {
  if (order < 1) fail("graph order must be positive");
  if (!(edge_probability >= 0.0 && edge_probability <= 1.0))
    fail("edge probability must lie in [0, 1]");
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return [=](std::size_t batch_size) {
    std::bernoulli_distribution edge(edge_probability);
    std::size_t nn = static_cast<std::size_t>(order) * order;
    U8Array m({batch_size, static_cast<std::size_t>(order), static_cast<std::size_t>(order)});
    for (std::size_t b = 0; b < batch_size; ++b)
      for (int u = 0; u < order; ++u)
        for (int v = u; v < order; ++v) {
          if (!kind.allow_loops && u == v) continue;
          auto c = static_cast<std::uint8_t>(edge(*rng) ? 1 : 0);
          m.data[b * nn + static_cast<std::size_t>(u) * order + v] = c;
          if (kind.is_directed && u != v)
            m.data[b * nn + static_cast<std::size_t>(v) * order + u] =
                static_cast<std::uint8_t>(edge(*rng) ? 1 : 0);
          else if (u != v)
            m.data[b * nn + static_cast<std::size_t>(v) * order + u] = c;
        }
    return make_graph(GraphFormat::AdjacencyColors, std::move(m), 2, kind);
  };
}

GraphGenerator callback_graph_generator(std::function<EdgeColoredGraph(std::size_t)> callback,
                                        int edge_colors, GraphKind kind, int order) {
  if (!callback) fail("generator callback must be set");
  return [=](std::size_t batch_size) {
    EdgeColoredGraph g = callback(batch_size);
    if (g.batch_size() != std::optional<std::size_t>(batch_size))
      fail("generator callback returned a wrong batch size");
    if (g.edge_colors() != edge_colors || !(g.kind() == kind) || g.order() != order)
      fail("generator callback returned graphs of a different shape");
    if (!g.is_fully_colored()) fail("generator callback returned partially colored graphs");
    return g;
  };
}

// ---- base environment ----

GraphEnvironment::GraphEnvironment(Invariant graph_invariant, CommunicationSetting setting,
                                   int edge_colors, GraphKind kind, int order,
                                   EdgeOrdering ordering, std::size_t episode_length,
                                   bool continuing, int action_count, GraphGenerator generator)
    : invariant_(std::move(graph_invariant)),
      setting_(std::move(setting)),
      edge_colors_(edge_colors),
      kind_(kind),
      order_(order),
      ordering_(ordering),
      episode_length_(episode_length),
      continuing_(continuing),
      action_count_(action_count),
      generator_(std::move(generator)),
      slots_(edge_slot_order(order, kind, ordering)) {}

std::size_t GraphEnvironment::state_length() const {
  return static_cast<std::size_t>(edge_colors_ - 1) * slots_.size() + extra_state_length();
}

BatchStatus GraphEnvironment::status() const {
  if (batch_ == 0) throw std::logic_error("no active batch; call reset_batch first");
  return status_;
}

void GraphEnvironment::set_setting(CommunicationSetting setting) {
  setting_ = std::move(setting);
  anchored_ = false;
}

void GraphEnvironment::draw_initial_graphs() {
  EdgeColoredGraph g = generator_(batch_);
  if (g.batch_size() != std::optional<std::size_t>(batch_))
    fail("generator returned a wrong batch size");
  if (g.edge_colors() != edge_colors_ || !(g.kind() == kind_) || g.order() != order_)
    fail("generator output does not match the environment parameters");
  if (!g.is_fully_colored()) fail("generator must produce fully colored graphs");
  colors_ = g.colors();
}

void GraphEnvironment::color_slot(std::size_t element, int u, int v, std::uint8_t color) {
  std::size_t nn = static_cast<std::size_t>(order_) * order_;
  colors_[element * nn + static_cast<std::size_t>(u) * order_ + v] = color;
  if (!kind_.is_directed)
    colors_[element * nn + static_cast<std::size_t>(v) * order_ + u] = color;
}

std::uint8_t GraphEnvironment::slot_color(std::size_t element, int u, int v) const {
  std::size_t nn = static_cast<std::size_t>(order_) * order_;
  return colors_[element * nn + static_cast<std::size_t>(u) * order_ + v];
}

std::uint8_t GraphEnvironment::flipped(std::size_t element, int u, int v) const {
  return static_cast<std::uint8_t>(1 - slot_color(element, u, v));
}

std::uint8_t GraphEnvironment::column_color(const std::uint8_t* row, std::size_t slot) const {
  int bits = 0;
  std::uint8_t color = 0;
  for (int c = 1; c < edge_colors_; ++c)
    if (row[static_cast<std::size_t>(c - 1) * slots_.size() + slot]) {
      ++bits;
      color = static_cast<std::uint8_t>(c);
    }
  if (bits > 1) fail("state has multiple color bits set for one slot");
  return color;
}

int GraphEnvironment::one_hot_index(const std::uint8_t* block, std::size_t width) {
  int index = -1;
  for (std::size_t i = 0; i < width; ++i)
    if (block[i]) {
      if (index >= 0) fail("state has multiple bits set in a one-hot block");
      index = static_cast<int>(i);
    }
  return index;
}

std::vector<std::uint8_t> GraphEnvironment::decode_row(const std::uint8_t* row) const {
  std::vector<std::uint8_t> slot_colors(slots_.size());
  for (std::size_t j = 0; j < slots_.size(); ++j) slot_colors[j] = column_color(row, j);
  return slot_colors;
}

U8Array GraphEnvironment::build_states() const {
  std::size_t length = state_length();
  U8Array states({batch_, length}, 0);
  std::size_t nn = static_cast<std::size_t>(order_) * order_;
  for (std::size_t b = 0; b < batch_; ++b) {
    std::uint8_t* row = states.data.data() + b * length;
    for (std::size_t j = 0; j < slots_.size(); ++j) {
      auto [u, v] = slots_[j];
      std::uint8_t c = colors_[b * nn + static_cast<std::size_t>(u) * order_ + v];
      if (c >= 1 && c < edge_colors_)
        row[static_cast<std::size_t>(c - 1) * slots_.size() + j] = 1;
    }
    write_extra_bits(b, row);
  }
  return states;
}

EdgeColoredGraph GraphEnvironment::current_graphs() const {
  U8Array m({batch_, static_cast<std::size_t>(order_), static_cast<std::size_t>(order_)},
            colors_);
  return make_graph(GraphFormat::AdjacencyColors, std::move(m), edge_colors_, kind_);
}

EdgeColoredGraph GraphEnvironment::state_batch_to_graph_batch(const U8Array& states) const {
  if (states.shape.size() != 2 || states.shape[1] != state_length() || states.shape[0] == 0)
    fail("state batch must have shape (batch size, state length)");
  for (std::uint8_t x : states.data)
    if (x > 1) fail("state entries must be 0 or 1");
  std::size_t rows = states.shape[0];
  std::size_t nn = static_cast<std::size_t>(order_) * order_;
  U8Array m({rows, static_cast<std::size_t>(order_), static_cast<std::size_t>(order_)}, 0);
  for (std::size_t b = 0; b < rows; ++b) {
    const std::uint8_t* row = states.data.data() + b * state_length();
    std::vector<std::uint8_t> slot_colors = decode_row(row);
    for (std::size_t j = 0; j < slots_.size(); ++j) {
      auto [u, v] = slots_[j];
      m.data[b * nn + static_cast<std::size_t>(u) * order_ + v] = slot_colors[j];
      if (!kind_.is_directed)
        m.data[b * nn + static_cast<std::size_t>(v) * order_ + u] = slot_colors[j];
    }
  }
  return make_graph(GraphFormat::AdjacencyColors, std::move(m), edge_colors_, kind_);
}

bool GraphEnvironment::action_available(std::size_t, int) const { return true; }

U8Array GraphEnvironment::action_mask() const {
  if (batch_ == 0) throw std::logic_error("no active batch; call reset_batch first");
  U8Array mask({batch_, static_cast<std::size_t>(action_count_)}, 0);
  for (std::size_t b = 0; b < batch_; ++b)
    for (int a = 0; a < action_count_; ++a)
      mask.data[b * action_count_ + a] = action_available(b, a) ? 1 : 0;
  return mask;
}

ScoreVector GraphEnvironment::evaluate_full(const EdgeColoredGraph& graphs) {
  ScoreVector scores = invariant_.f(graphs);
  if (scores.size() != batch_)
    fail("graph invariant returned " + std::to_string(scores.size()) +
         " scores for a batch of " + std::to_string(batch_));
  for (float s : scores)
    if (!std::isfinite(s)) throw std::runtime_error("graph invariant produced a non-finite score");
  return scores;
}

ScoreVector GraphEnvironment::evaluate_dense() {
  EdgeColoredGraph graphs = current_graphs();
  ScoreVector scores;
  if (setting_.delta && anchored_ && anchor_graphs_) {
    ScoreVector diff = setting_.delta(*anchor_graphs_, graphs);
    if (diff.size() != batch_)
      fail("difference function returned " + std::to_string(diff.size()) +
           " scores for a batch of " + std::to_string(batch_));
    scores = anchor_scores_;
    for (std::size_t b = 0; b < batch_; ++b) scores[b] += diff[b];
    for (float s : scores)
      if (!std::isfinite(s))
        throw std::runtime_error("graph invariant produced a non-finite score");
  } else {
    scores = evaluate_full(graphs);
  }
  anchor_scores_ = scores;
  anchor_graphs_ = std::move(graphs);
  anchored_ = true;
  return scores;
}

StepResult GraphEnvironment::reset_batch(std::size_t batch_size) {
  if (batch_size == 0) fail("batch size must be positive");
  batch_ = batch_size;
  step_ = 0;
  status_ = BatchStatus::InProgress;
  anchored_ = false;
  initialize_batch();

  StepResult result;
  result.states = build_states();
  result.status = status_;
  EdgeColoredGraph graphs = current_graphs();
  ScoreVector scores = evaluate_full(graphs);
  anchor_scores_ = scores;
  anchor_graphs_ = std::move(graphs);
  anchored_ = true;
  if (!setting_.sparse) result.scores = std::move(scores);
  return result;
}

StepResult GraphEnvironment::step_batch(const std::vector<std::int32_t>& actions) {
  if (batch_ == 0) throw std::logic_error("no active batch; call reset_batch first");
  if (status_ != BatchStatus::InProgress)
    throw std::logic_error("cannot step a finished batch; call reset_batch");
  if (actions.size() != batch_)
    fail("expected " + std::to_string(batch_) + " actions, got " +
         std::to_string(actions.size()));
  for (std::size_t b = 0; b < batch_; ++b) {
    if (actions[b] < 0 || actions[b] >= action_count_)
      fail("action " + std::to_string(actions[b]) + " out of range for episode " +
           std::to_string(b));
    if (!action_available(b, actions[b]))
      fail("action " + std::to_string(actions[b]) + " is masked in episode " +
           std::to_string(b));
  }

  apply_actions(actions);
  ++step_;
  if (step_ == episode_length_)
    status_ = continuing_ ? BatchStatus::Truncated : BatchStatus::Terminated;

  StepResult result;
  result.states = build_states();
  result.status = status_;
  if (!setting_.sparse) {
    result.scores = evaluate_dense();
  } else {
    anchored_ = false;
    if (status_ != BatchStatus::InProgress) result.scores = evaluate_full(current_graphs());
  }
  return result;
}

// ---- linear environments ----

namespace {

class LinearEnvironment : public GraphEnvironment {
 public:
  using GraphEnvironment::GraphEnvironment;

 protected:
  std::size_t extra_state_length() const override { return flat_length(); }

  void write_extra_bits(std::size_t, std::uint8_t* row) const override {
    if (current_step() < flat_length())
      row[static_cast<std::size_t>(edge_colors() - 1) * flat_length() + current_step()] = 1;
  }

  std::vector<std::uint8_t> decode_row(const std::uint8_t* row) const override {
    one_hot_index(row + static_cast<std::size_t>(edge_colors() - 1) * flat_length(),
                  flat_length());
    return GraphEnvironment::decode_row(row);
  }
};

class LinearBuildEnvironment final : public LinearEnvironment {
 public:
  using LinearEnvironment::LinearEnvironment;

 protected:
  void initialize_batch() override {
    std::size_t n = static_cast<std::size_t>(order());
    colors_.assign(batch_size() * n * n, static_cast<std::uint8_t>(edge_colors()));
    if (!kind().allow_loops)
      for (std::size_t b = 0; b < batch_size(); ++b)
        for (std::size_t u = 0; u < n; ++u) colors_[b * n * n + u * n + u] = 0;
  }

  void apply_actions(const std::vector<std::int32_t>& actions) override {
    auto [u, v] = slots()[current_step()];
    for (std::size_t b = 0; b < batch_size(); ++b)
      color_slot(b, u, v, static_cast<std::uint8_t>(actions[b]));
  }

  // The position one-hot tells how many slots have been colored; columns
  // without any set bit before it decode to color 0, after it to uncolored.
  std::vector<std::uint8_t> decode_row(const std::uint8_t* row) const override {
    std::size_t l = flat_length();
    int position = one_hot_index(row + static_cast<std::size_t>(edge_colors() - 1) * l, l);
    std::size_t colored = position < 0 ? l : static_cast<std::size_t>(position);
    std::vector<std::uint8_t> slot_colors(l);
    for (std::size_t j = 0; j < l; ++j) {
      std::uint8_t c = column_color(row, j);
      if (j >= colored) {
        if (c != 0) fail("state has a colored slot beyond the position");
        c = static_cast<std::uint8_t>(edge_colors());
      }
      slot_colors[j] = c;
    }
    return slot_colors;
  }
};

class LinearSetEnvironment final : public LinearEnvironment {
 public:
  using LinearEnvironment::LinearEnvironment;

 protected:
  void initialize_batch() override { draw_initial_graphs(); }

  void apply_actions(const std::vector<std::int32_t>& actions) override {
    auto [u, v] = slots()[current_step()];
    for (std::size_t b = 0; b < batch_size(); ++b)
      color_slot(b, u, v, static_cast<std::uint8_t>(actions[b]));
  }
};

class LinearFlipEnvironment final : public LinearEnvironment {
 public:
  using LinearEnvironment::LinearEnvironment;

 protected:
  void initialize_batch() override { draw_initial_graphs(); }

  void apply_actions(const std::vector<std::int32_t>& actions) override {
    auto [u, v] = slots()[current_step()];
    for (std::size_t b = 0; b < batch_size(); ++b)
      if (actions[b] == 1) color_slot(b, u, v, flipped(b, u, v));
  }
};

// ---- global environments ----

class GlobalSetEnvironment final : public GraphEnvironment {
 public:
  using GraphEnvironment::GraphEnvironment;

 protected:
  std::size_t extra_state_length() const override { return 0; }
  void write_extra_bits(std::size_t, std::uint8_t*) const override {}
  void initialize_batch() override { draw_initial_graphs(); }

  void apply_actions(const std::vector<std::int32_t>& actions) override {
    auto l = static_cast<std::int32_t>(flat_length());
    for (std::size_t b = 0; b < batch_size(); ++b) {
      auto [u, v] = slots()[static_cast<std::size_t>(actions[b] % l)];
      color_slot(b, u, v, static_cast<std::uint8_t>(actions[b] / l));
    }
  }
};

class GlobalFlipEnvironment final : public GraphEnvironment {
 public:
  GlobalFlipEnvironment(Invariant graph_invariant, CommunicationSetting setting, GraphKind kind,
                        int order, EdgeOrdering ordering, std::size_t episode_length,
                        int action_count, GraphGenerator generator, bool flip_only)
      : GraphEnvironment(std::move(graph_invariant), std::move(setting), 2, kind, order,
                         ordering, episode_length, true, action_count, std::move(generator)),
        flip_only_(flip_only) {}

 protected:
  std::size_t extra_state_length() const override { return 0; }
  void write_extra_bits(std::size_t, std::uint8_t*) const override {}
  void initialize_batch() override { draw_initial_graphs(); }

  void apply_actions(const std::vector<std::int32_t>& actions) override {
    auto l = static_cast<std::int32_t>(flat_length());
    for (std::size_t b = 0; b < batch_size(); ++b) {
      std::int32_t slot = flip_only_ ? actions[b] : actions[b] % l;
      bool flip = flip_only_ || actions[b] / l == 1;
      auto [u, v] = slots()[static_cast<std::size_t>(slot)];
      if (flip) color_slot(b, u, v, flipped(b, u, v));
    }
  }

 private:
  bool flip_only_;
};

// ---- local environments ----

class LocalEnvironment : public GraphEnvironment {
 public:
  LocalEnvironment(Invariant graph_invariant, CommunicationSetting setting, int edge_colors,
                   GraphKind kind, int order, EdgeOrdering ordering,
                   std::size_t episode_length, int action_count, GraphGenerator generator,
                   int starting_vertex)
      : GraphEnvironment(std::move(graph_invariant), std::move(setting), edge_colors, kind,
                         order, ordering, episode_length, true, action_count,
                         std::move(generator)),
        starting_vertex_(starting_vertex) {}

 protected:
  std::size_t extra_state_length() const override {
    return static_cast<std::size_t>(order());
  }

  void write_extra_bits(std::size_t element, std::uint8_t* row) const override {
    row[static_cast<std::size_t>(edge_colors() - 1) * flat_length() +
        static_cast<std::size_t>(position_[element])] = 1;
  }

  void initialize_batch() override {
    draw_initial_graphs();
    position_.assign(batch_size(), starting_vertex_);
  }

  bool action_available(std::size_t element, int action) const override {
    if (kind().allow_loops) return true;
    return action % order() != position_[element];
  }

  std::vector<std::uint8_t> decode_row(const std::uint8_t* row) const override {
    one_hot_index(row + static_cast<std::size_t>(edge_colors() - 1) * flat_length(),
                  static_cast<std::size_t>(order()));
    return GraphEnvironment::decode_row(row);
  }

  int starting_vertex_;
  std::vector<int> position_;
};

class LocalSetEnvironment final : public LocalEnvironment {
 public:
  using LocalEnvironment::LocalEnvironment;

 protected:
  void apply_actions(const std::vector<std::int32_t>& actions) override {
    for (std::size_t b = 0; b < batch_size(); ++b) {
      int dest = actions[b] % order();
      color_slot(b, position_[b], dest, static_cast<std::uint8_t>(actions[b] / order()));
      position_[b] = dest;
    }
  }
};

class LocalFlipEnvironment final : public LocalEnvironment {
 public:
  LocalFlipEnvironment(Invariant graph_invariant, CommunicationSetting setting, GraphKind kind,
                       int order, EdgeOrdering ordering, std::size_t episode_length,
                       int action_count, GraphGenerator generator, int starting_vertex,
                       bool flip_only)
      : LocalEnvironment(std::move(graph_invariant), std::move(setting), 2, kind, order,
                         ordering, episode_length, action_count, std::move(generator),
                         starting_vertex),
        flip_only_(flip_only) {}

 protected:
  void apply_actions(const std::vector<std::int32_t>& actions) override {
    for (std::size_t b = 0; b < batch_size(); ++b) {
      int dest = actions[b] % order();
      bool flip = flip_only_ || actions[b] / order() == 1;
      if (flip) color_slot(b, position_[b], dest, flipped(b, position_[b], dest));
      position_[b] = dest;
    }
  }

 private:
  bool flip_only_;
};

GraphGenerator default_generator(const GraphGenerator& provided, int edge_colors,
                                 GraphKind kind, int order) {
  if (provided) return provided;
  return fixed_graph_generator(monochromatic_graph(order, 0, edge_colors, kind));
}

}  // namespace

// ---- factories ----

std::unique_ptr<GraphEnvironment> linear_build_environment(LinearOptions options) {
  check_environment_basics(options.graph_invariant, options.graph_order, options.edge_colors);
  if (options.generator) fail("linear build starts from an uncolored graph and takes no generator");
  std::size_t length = flattened_length(options.graph_order, options.kind);
  return std::make_unique<LinearBuildEnvironment>(
      std::move(options.graph_invariant), std::move(options.setting), options.edge_colors,
      options.kind, options.graph_order, options.ordering, length, false,
      options.edge_colors, nullptr);
}

std::unique_ptr<GraphEnvironment> linear_set_environment(LinearOptions options) {
  check_environment_basics(options.graph_invariant, options.graph_order, options.edge_colors);
  std::size_t length = flattened_length(options.graph_order, options.kind);
  return std::make_unique<LinearSetEnvironment>(
      std::move(options.graph_invariant), std::move(options.setting), options.edge_colors,
      options.kind, options.graph_order, options.ordering, length, false, options.edge_colors,
      default_generator(options.generator, options.edge_colors, options.kind,
                        options.graph_order));
}

std::unique_ptr<GraphEnvironment> linear_flip_environment(LinearOptions options) {
  check_environment_basics(options.graph_invariant, options.graph_order, options.edge_colors);
  check_flip_colors(options.edge_colors);
  std::size_t length = flattened_length(options.graph_order, options.kind);
  return std::make_unique<LinearFlipEnvironment>(
      std::move(options.graph_invariant), std::move(options.setting), 2, options.kind,
      options.graph_order, options.ordering, length, false, 2,
      default_generator(options.generator, 2, options.kind, options.graph_order));
}

std::unique_ptr<GraphEnvironment> global_set_environment(GlobalOptions options) {
  check_environment_basics(options.graph_invariant, options.graph_order, options.edge_colors);
  if (options.flip_only) fail("flip_only applies to flip environments");
  if (options.episode_length < 1) fail("episode length must be at least 1");
  std::size_t length = flattened_length(options.graph_order, options.kind);
  return std::make_unique<GlobalSetEnvironment>(
      std::move(options.graph_invariant), std::move(options.setting), options.edge_colors,
      options.kind, options.graph_order, options.ordering, options.episode_length, true,
      options.edge_colors * static_cast<int>(length),
      default_generator(options.generator, options.edge_colors, options.kind,
                        options.graph_order));
}

std::unique_ptr<GraphEnvironment> global_flip_environment(GlobalOptions options) {
  check_environment_basics(options.graph_invariant, options.graph_order, options.edge_colors);
  check_flip_colors(options.edge_colors);
  if (options.episode_length < 1) fail("episode length must be at least 1");
  auto length = static_cast<int>(flattened_length(options.graph_order, options.kind));
  return std::make_unique<GlobalFlipEnvironment>(
      std::move(options.graph_invariant), std::move(options.setting), options.kind,
      options.graph_order, options.ordering, options.episode_length,
      options.flip_only ? length : 2 * length,
      default_generator(options.generator, 2, options.kind, options.graph_order),
      options.flip_only);
}

std::unique_ptr<GraphEnvironment> local_set_environment(LocalOptions options) {
  check_environment_basics(options.graph_invariant, options.graph_order, options.edge_colors);
  if (options.flip_only) fail("flip_only applies to flip environments");
  if (options.episode_length < 1) fail("episode length must be at least 1");
  if (options.starting_vertex < 0 || options.starting_vertex >= options.graph_order)
    fail("starting vertex out of range");
  return std::make_unique<LocalSetEnvironment>(
      std::move(options.graph_invariant), std::move(options.setting), options.edge_colors,
      options.kind, options.graph_order, options.ordering, options.episode_length,
      options.edge_colors * options.graph_order,
      default_generator(options.generator, options.edge_colors, options.kind,
                        options.graph_order),
      options.starting_vertex);
}

std::unique_ptr<GraphEnvironment> local_flip_environment(LocalOptions options) {
  check_environment_basics(options.graph_invariant, options.graph_order, options.edge_colors);
  check_flip_colors(options.edge_colors);
  if (options.episode_length < 1) fail("episode length must be at least 1");
  if (options.starting_vertex < 0 || options.starting_vertex >= options.graph_order)
    fail("starting vertex out of range");
  return std::make_unique<LocalFlipEnvironment>(
      std::move(options.graph_invariant), std::move(options.setting), options.kind,
      options.graph_order, options.ordering, options.episode_length,
      options.flip_only ? options.graph_order : 2 * options.graph_order,
      default_generator(options.generator, 2, options.kind, options.graph_order),
      options.starting_vertex, options.flip_only);
}

}  // namespace graphrl
