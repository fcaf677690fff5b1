#pragma once

#include <vector>

#include "graphrl/graph.hpp"

// Four fixed reference graphs (G1-G4) covering every kind combination,
// with hand-checked values for all eight formats. The arrays below are
// frozen: codec tests compare against them entry by entry.
namespace fixtures {

struct ReferenceGraph {
  const char* name;
  int edge_colors;
  graphrl::GraphKind kind;
  int order;
  bool fully_colored;
  graphrl::U64Array bitmask_out;
  graphrl::U64Array bitmask_in;
  graphrl::U8Array adjacency_colors;
  graphrl::U8Array adjacency_binary;
  graphrl::U8Array flat_row_major_colors;
  graphrl::U8Array flat_row_major_binary;
  graphrl::U8Array flat_clockwise_colors;
  graphrl::U8Array flat_clockwise_binary;

  graphrl::GraphArray representation(graphrl::GraphFormat f) const;
};

const ReferenceGraph& g1();  // 3 colors, directed, loops, n=4, partially colored
const ReferenceGraph& g2();  // 3 colors, directed, no loops, n=4, fully colored
const ReferenceGraph& g3();  // 4 colors, undirected, loops, n=3, partially colored
const ReferenceGraph& g4();  // 2 colors, undirected, no loops, n=5, fully colored
std::vector<const ReferenceGraph*> all_reference_graphs();

// Builds the graph from its adjacency-color matrix.
graphrl::EdgeColoredGraph build(const ReferenceGraph& r);

}  // namespace fixtures
