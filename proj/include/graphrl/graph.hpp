#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "graphrl/array.hpp"

namespace graphrl {

// Kind of a k-edge-colored looped complete graph. Fixed at construction;
// every graph in a batch shares one kind.
struct GraphKind {
  bool is_directed = false;
  bool allow_loops = false;

  friend bool operator==(const GraphKind&, const GraphKind&) = default;
};

// The eight interchangeable array representations.
enum class GraphFormat {
  BitmaskOut,
  BitmaskIn,
  AdjacencyColors,
  AdjacencyBinary,
  FlatRowMajorColors,
  FlatRowMajorBinary,
  FlatClockwiseColors,
  FlatClockwiseBinary,
};

enum class EdgeOrdering { RowMajor, Clockwise };

// Bitmask formats carry uint64 words, all others uint8 entries.
using GraphArray = std::variant<U8Array, U64Array>;

const char* format_name(GraphFormat f);

// Number of valid edge slots: n^2 / n^2-n / C(n+1,2) / C(n,2) by kind.
std::size_t flattened_length(int order, GraphKind kind);

// Row-major position of slot (u,v): row by row, left to right, diagonal
// skipped when loops are disallowed, upper triangle only when undirected.
// Undirected slots must be given with u <= v.
std::size_t row_major_index(int u, int v, int order, GraphKind kind);
std::pair<int, int> row_major_slot(std::size_t index, int order, GraphKind kind);

// Clockwise layer position of slot (u,v): layer j lists (0,j),(1,j),...,(j,j)
// then, for directed graphs, (j,j-1),...,(j,0); invalid slots are skipped.
// For undirected graphs this is column-major over the upper triangle.
std::size_t clockwise_index(int u, int v, int order, GraphKind kind);
std::pair<int, int> clockwise_slot(std::size_t index, int order, GraphKind kind);

// All valid slots of a kind in the given traversal order (length = flattened_length).
std::vector<std::pair<int, int>> edge_slot_order(int order, GraphKind kind,
                                                 EdgeOrdering ordering);

// A k-edge-colored looped complete graph, or a batch of them. Colors live in
// {0..k}, where color k marks an uncolored slot. Values are immutable; copies
// are cheap and share the lazily filled per-format conversion cache.
class EdgeColoredGraph {
 public:
  // Builds a graph from one or more format representations, which must all
  // decode to the same coloring. Batch inputs carry one extra leading axis.
  EdgeColoredGraph(int edge_colors, GraphKind kind,
                   std::vector<std::pair<GraphFormat, GraphArray>> reps);

  int edge_colors() const;  // k
  GraphKind kind() const;
  int order() const;  // n
  std::optional<std::size_t> batch_size() const;

  // True iff no valid slot carries color k (for a batch: in any element).
  bool is_fully_colored() const;
  // Per-element flags (length 1 for a single graph).
  std::vector<std::uint8_t> fully_colored_elements() const;

  // Conversions. Bitmask and binary-slice formats come out reduced (color-0
  // slice omitted, slices ordered 1..k-1) exactly when the graph is fully
  // colored. Bitmask formats require n <= 64.
  GraphArray to_format(GraphFormat fmt) const;
  const U64Array& bitmask_out() const;
  const U64Array& bitmask_in() const;
  const U8Array& adjacency_colors() const;
  const U8Array& adjacency_binary() const;
  const U8Array& flat_row_major_colors() const;
  const U8Array& flat_row_major_binary() const;
  const U8Array& flat_clockwise_colors() const;
  const U8Array& flat_clockwise_binary() const;

  // Canonical storage: batch * n * n color bytes, symmetric when undirected,
  // diagonal 0 when loops are disallowed. Batch is 1 for single graphs.
  const std::vector<std::uint8_t>& colors() const;
  std::uint8_t color_at(std::size_t element, int u, int v) const;

  static EdgeColoredGraph stack(const std::vector<EdgeColoredGraph>& graphs);
  EdgeColoredGraph select(std::size_t index) const;

  friend bool operator==(const EdgeColoredGraph& a, const EdgeColoredGraph& b);

 private:
  struct Impl;
  explicit EdgeColoredGraph(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

// Free-function spelling of the constructor.
EdgeColoredGraph make_graph(int edge_colors, GraphKind kind,
                            std::vector<std::pair<GraphFormat, GraphArray>> reps);
// Single-representation convenience; defaults: undirected, no loops, k = 2.
EdgeColoredGraph make_graph(GraphFormat fmt, GraphArray array, int edge_colors = 2,
                            GraphKind kind = {});

}  // namespace graphrl
