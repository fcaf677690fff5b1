#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "graphrl/array.hpp"
#include "graphrl/graph.hpp"
#include "graphrl/invariants.hpp"

namespace graphrl {

enum class BatchStatus { InProgress, Terminated, Truncated };

// Sparse: scores are returned only when the batch finishes. Dense (the
// default): scores are returned at reset and after every step. In dense mode
// an optional difference function may replace full invariant evaluation:
// it receives (previous batch, current batch) and returns element-wise score
// differences, which are accumulated onto the previous scores.
struct CommunicationSetting {
  bool sparse = false;
  std::function<ScoreVector(const EdgeColoredGraph&, const EdgeColoredGraph&)> delta;
};

// Maps a requested batch size to a fully colored graph batch matching the
// consuming environment's edge colors, kind, and order.
using GraphGenerator = std::function<EdgeColoredGraph(std::size_t)>;

// Every batch element is a copy of the same graph.
GraphGenerator fixed_graph_generator(EdgeColoredGraph graph);
// Every slot color drawn independently and uniformly from {0..k-1}.
GraphGenerator uniform_random_generator(int edge_colors, GraphKind kind, int order,
                                        std::uint64_t seed);
// Two colors; each slot is colored 1 with the given probability.
GraphGenerator bernoulli_graph_generator(GraphKind kind, int order,
                                         double edge_probability, std::uint64_t seed);
// Wraps a user callback with output validation against the expected shape.
GraphGenerator callback_graph_generator(std::function<EdgeColoredGraph(std::size_t)> callback,
                                        int edge_colors, GraphKind kind, int order);

struct StepResult {
  U8Array states;                     // (batch_size, state_length), entries 0/1
  std::optional<ScoreVector> scores;  // present per the communication setting
  BatchStatus status = BatchStatus::InProgress;
};

// Batched deterministic graph-building environment. reset_batch starts a
// fresh batch of identical-length episodes; step_batch advances all of them
// with one action apiece. All episodes in a batch always share one status.
class GraphEnvironment {
 public:
  virtual ~GraphEnvironment() = default;
  GraphEnvironment(const GraphEnvironment&) = delete;
  GraphEnvironment& operator=(const GraphEnvironment&) = delete;

  StepResult reset_batch(std::size_t batch_size);
  StepResult step_batch(const std::vector<std::int32_t>& actions);

  // 0/1 matrix (batch_size, action_number); 1 marks an available action.
  U8Array action_mask() const;

  // phi: pure decoding of state rows into a graph batch. Only the color
  // indicator blocks matter; trailing one-hot blocks are validated but do
  // not affect the result (except in Linear Build, where the position
  // determines how many slots have been colored).
  EdgeColoredGraph state_batch_to_graph_batch(const U8Array& states) const;

  std::size_t state_length() const;
  int action_number() const { return action_count_; }
  std::size_t episode_length() const { return episode_length_; }
  bool is_continuing() const { return continuing_; }

  int edge_colors() const { return edge_colors_; }
  GraphKind kind() const { return kind_; }
  int order() const { return order_; }
  EdgeOrdering ordering() const { return ordering_; }

  const CommunicationSetting& setting() const { return setting_; }
  // Takes effect at the next score computation. Switching onto a difference
  // function mid-episode forces one full evaluation to re-anchor.
  void set_setting(CommunicationSetting setting);

  std::size_t batch_size() const { return batch_; }
  BatchStatus status() const;

  // Construction goes through the factory functions below; the class is
  // abstract, so this cannot be invoked directly anyway.
  GraphEnvironment(Invariant graph_invariant, CommunicationSetting setting,
                   int edge_colors, GraphKind kind, int order, EdgeOrdering ordering,
                   std::size_t episode_length, bool continuing, int action_count,
                   GraphGenerator generator);

 protected:
  // Extra state bits appended after the (k-1) color blocks.
  virtual std::size_t extra_state_length() const = 0;
  // Fills colors_ (and any per-element bookkeeping) for a new batch.
  virtual void initialize_batch() = 0;
  // Applies one already-validated action per element to colors_.
  virtual void apply_actions(const std::vector<std::int32_t>& actions) = 0;
  // Writes the trailing bits of one state row (row points at the row start).
  virtual void write_extra_bits(std::size_t element, std::uint8_t* row) const = 0;
  virtual bool action_available(std::size_t element, int action) const;
  // Per-slot colors of one decoded state row; color k marks uncolored.
  virtual std::vector<std::uint8_t> decode_row(const std::uint8_t* row) const;

  // Invokes the generator and loads the result into colors_.
  void draw_initial_graphs();
  void color_slot(std::size_t element, int u, int v, std::uint8_t color);
  std::uint8_t slot_color(std::size_t element, int u, int v) const;
  std::uint8_t flipped(std::size_t element, int u, int v) const;
  // Color of the state-row column for one slot; throws if several bits set.
  std::uint8_t column_color(const std::uint8_t* row, std::size_t slot) const;
  // Index of the single set bit, -1 if none; throws if several bits set.
  static int one_hot_index(const std::uint8_t* block, std::size_t width);

  const std::vector<std::pair<int, int>>& slots() const { return slots_; }
  std::size_t flat_length() const { return slots_.size(); }
  std::size_t current_step() const { return step_; }

 private:
  U8Array build_states() const;
  EdgeColoredGraph current_graphs() const;
  ScoreVector evaluate_dense();
  ScoreVector evaluate_full(const EdgeColoredGraph& graphs);

  Invariant invariant_;
  CommunicationSetting setting_;
  int edge_colors_;
  GraphKind kind_;
  int order_;
  EdgeOrdering ordering_;
  std::size_t episode_length_;
  bool continuing_;
  int action_count_;
  GraphGenerator generator_;

  std::vector<std::pair<int, int>> slots_;

  std::size_t batch_ = 0;
  std::size_t step_ = 0;
  BatchStatus status_ = BatchStatus::InProgress;
  bool anchored_ = false;
  ScoreVector anchor_scores_;
  std::optional<EdgeColoredGraph> anchor_graphs_;

 protected:
  // Canonical per-element adjacency colors (batch * n * n); color k marks an
  // uncolored slot (Linear Build before the position reaches it).
  std::vector<std::uint8_t> colors_;
};

struct LinearOptions {
  Invariant graph_invariant;
  int graph_order = 2;
  int edge_colors = 2;
  GraphKind kind{};
  EdgeOrdering ordering = EdgeOrdering::RowMajor;
  CommunicationSetting setting{};
  GraphGenerator generator{};  // set/flip only; defaults to fixed monochromatic 0
};

struct GlobalOptions {
  Invariant graph_invariant;
  int graph_order = 2;
  int edge_colors = 2;
  GraphKind kind{};
  EdgeOrdering ordering = EdgeOrdering::RowMajor;
  CommunicationSetting setting{};
  GraphGenerator generator{};
  std::size_t episode_length = 1;
  bool flip_only = false;  // flip variant only
};

struct LocalOptions {
  Invariant graph_invariant;
  int graph_order = 2;
  int edge_colors = 2;
  GraphKind kind{};
  EdgeOrdering ordering = EdgeOrdering::RowMajor;
  CommunicationSetting setting{};
  GraphGenerator generator{};
  std::size_t episode_length = 1;
  bool flip_only = false;  // flip variant only
  int starting_vertex = 0;
};

// Slots are traversed in the configured order and colored one by one from an
// uncolored start; episodic with episode length = flattened length.
std::unique_ptr<GraphEnvironment> linear_build_environment(LinearOptions options);
// Same traversal over an initially fully colored graph; action = new color.
std::unique_ptr<GraphEnvironment> linear_set_environment(LinearOptions options);
// Two colors; action 1 flips the traversed slot, action 0 keeps it.
std::unique_ptr<GraphEnvironment> linear_flip_environment(LinearOptions options);
// Any slot recolored each step: action a -> slot a mod l, color floor(a/l).
std::unique_ptr<GraphEnvironment> global_set_environment(GlobalOptions options);
// Two colors; flip_only picks between q = l (always flip) and q = 2l.
std::unique_ptr<GraphEnvironment> global_flip_environment(GlobalOptions options);
// Agent walks the graph recoloring traversed edges: action a -> move to
// vertex a mod n, color floor(a/n). Self-moves are masked without loops.
std::unique_ptr<GraphEnvironment> local_set_environment(LocalOptions options);
// Two colors; flip_only picks between q = n and q = 2n.
std::unique_ptr<GraphEnvironment> local_flip_environment(LocalOptions options);

}  // namespace graphrl
