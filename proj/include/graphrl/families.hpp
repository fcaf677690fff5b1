#pragma once

#include <vector>

#include "graphrl/graph.hpp"

namespace graphrl {

// Structured-graph constructors. All are 2-colored undirected loopless graphs
// with edges carrying color 1, except monochromatic_graph which takes any k,
// kind, and color.
EdgeColoredGraph monochromatic_graph(int order, int selected_color, int edge_colors = 2,
                                     GraphKind kind = {});
EdgeColoredGraph empty_graph(int order);
EdgeColoredGraph complete_graph(int order);
// Complete graph minus the single edge {0, 1}.
EdgeColoredGraph almost_complete_graph(int order);
EdgeColoredGraph complete_bipartite_graph(int part_a, int part_b);
EdgeColoredGraph complete_multipartite_graph(const std::vector<int>& part_sizes);
// order-1 leaves joined to hub vertex 0.
EdgeColoredGraph star_graph(int order);
EdgeColoredGraph path_graph(int order);
EdgeColoredGraph cycle_graph(int order);
// Hub vertex 0 joined to a cycle on the remaining order-1 vertices.
EdgeColoredGraph wheel_graph(int order);
// pages triangles sharing the edge {0, 1}; order = pages + 2.
EdgeColoredGraph book_graph(int pages);
// triangle_count triangles sharing vertex 0; order = 2 * triangle_count + 1.
EdgeColoredGraph friendship_graph(int triangle_count);

}  // namespace graphrl
