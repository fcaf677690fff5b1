#include "support/fixtures.hpp"

namespace fixtures {

using graphrl::GraphFormat;
using graphrl::GraphKind;
using graphrl::U64Array;
using graphrl::U8Array;

graphrl::GraphArray ReferenceGraph::representation(GraphFormat f) const {
  switch (f) {
    case GraphFormat::BitmaskOut: return bitmask_out;
    case GraphFormat::BitmaskIn: return bitmask_in;
    case GraphFormat::AdjacencyColors: return adjacency_colors;
    case GraphFormat::AdjacencyBinary: return adjacency_binary;
    case GraphFormat::FlatRowMajorColors: return flat_row_major_colors;
    case GraphFormat::FlatRowMajorBinary: return flat_row_major_binary;
    case GraphFormat::FlatClockwiseColors: return flat_clockwise_colors;
    case GraphFormat::FlatClockwiseBinary: return flat_clockwise_binary;
  }
  throw std::invalid_argument("unknown format");
}

const ReferenceGraph& g1() {
  static const ReferenceGraph r{
      "G1",
      3,
      GraphKind{true, true},
      4,
      false,
      U64Array({3, 4}, {8, 8, 0, 0, 0, 0, 4, 9, 7, 0, 10, 2}),
      U64Array({3, 4}, {0, 0, 0, 3, 8, 0, 4, 8, 1, 13, 1, 4}),
      U8Array({4, 4}, {2, 2, 2, 0, 3, 3, 3, 0, 3, 2, 1, 2, 1, 2, 3, 1}),
      U8Array({3, 4, 4}, {0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0,
                          0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 1,
                          1, 1, 1, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 1, 0, 0}),
      U8Array({16}, {2, 2, 2, 0, 3, 3, 3, 0, 3, 2, 1, 2, 1, 2, 3, 1}),
      U8Array({3, 16}, {0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0,
                        0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 1,
                        1, 1, 1, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 1, 0, 0}),
      U8Array({16}, {2, 2, 3, 3, 2, 3, 1, 2, 3, 0, 0, 2, 1, 3, 2, 1}),
      U8Array({3, 16}, {0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0,
                        0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1,
                        1, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 0}),
  };
  return r;
}

const ReferenceGraph& g2() {
  static const ReferenceGraph r{
      "G2",
      3,
      GraphKind{true, false},
      4,
      true,
      U64Array({2, 4}, {8, 12, 0, 0, 6, 0, 9, 2}),
      U64Array({2, 4}, {0, 0, 2, 3, 4, 9, 1, 4}),
      U8Array({4, 4}, {0, 2, 2, 1, 0, 0, 1, 1, 2, 0, 0, 2, 0, 2, 0, 0}),
      U8Array({2, 4, 4}, {0, 0, 0, 1, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0,
                          0, 1, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 1, 0, 0}),
      U8Array({12}, {2, 2, 1, 0, 1, 1, 2, 0, 2, 0, 2, 0}),
      U8Array({2, 12}, {0, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0,
                        1, 1, 0, 0, 0, 0, 1, 0, 1, 0, 1, 0}),
      U8Array({12}, {2, 0, 2, 1, 0, 2, 1, 1, 2, 0, 2, 0}),
      U8Array({2, 12}, {0, 0, 0, 1, 0, 0, 1, 1, 0, 0, 0, 0,
                        1, 0, 1, 0, 0, 1, 0, 0, 1, 0, 1, 0}),
  };
  return r;
}

const ReferenceGraph& g3() {
  static const ReferenceGraph r{
      "G3",
      4,
      GraphKind{false, true},
      3,
      false,
      U64Array({4, 3}, {2, 1, 0, 1, 4, 2, 4, 0, 1, 0, 2, 0}),
      U64Array({4, 3}, {2, 1, 0, 1, 4, 2, 4, 0, 1, 0, 2, 0}),
      U8Array({3, 3}, {1, 0, 2, 0, 3, 1, 2, 1, 4}),
      U8Array({4, 3, 3}, {0, 1, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 1, 0,
                          0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0}),
      U8Array({6}, {1, 0, 2, 3, 1, 4}),
      U8Array({4, 6}, {0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0,
                       0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0}),
      U8Array({6}, {1, 0, 3, 2, 1, 4}),
      U8Array({4, 6}, {0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0,
                       0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0}),
  };
  return r;
}

const ReferenceGraph& g4() {
  static const ReferenceGraph r{
      "G4",
      2,
      GraphKind{false, false},
      5,
      true,
      U64Array({1, 5}, {12, 24, 25, 23, 14}),
      U64Array({1, 5}, {12, 24, 25, 23, 14}),
      U8Array({5, 5}, {0, 0, 1, 1, 0, 0, 0, 0, 1, 1, 1, 0, 0, 1, 1,
                       1, 1, 1, 0, 1, 0, 1, 1, 1, 0}),
      U8Array({1, 5, 5}, {0, 0, 1, 1, 0, 0, 0, 0, 1, 1, 1, 0, 0, 1, 1,
                          1, 1, 1, 0, 1, 0, 1, 1, 1, 0}),
      U8Array({10}, {0, 1, 1, 0, 0, 1, 1, 1, 1, 1}),
      U8Array({1, 10}, {0, 1, 1, 0, 0, 1, 1, 1, 1, 1}),
      U8Array({10}, {0, 1, 0, 1, 1, 1, 0, 1, 1, 1}),
      U8Array({1, 10}, {0, 1, 0, 1, 1, 1, 0, 1, 1, 1}),
  };
  return r;
}

std::vector<const ReferenceGraph*> all_reference_graphs() {
  return {&g1(), &g2(), &g3(), &g4()};
}

graphrl::EdgeColoredGraph build(const ReferenceGraph& r) {
  return graphrl::make_graph(GraphFormat::AdjacencyColors, r.adjacency_colors,
                             r.edge_colors, r.kind);
}

}  // namespace fixtures
