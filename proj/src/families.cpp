#include "graphrl/families.hpp"

#include <numeric>
#include <stdexcept>

namespace graphrl {

namespace {

// Adjacency-color builder for the simple 2-colored undirected families.
struct Builder {
  int n;
  U8Array m;

  explicit Builder(int order, int minimum) : n(order) {
    if (order < minimum)
      throw std::invalid_argument("graph order below the family minimum");
    m = U8Array({static_cast<std::size_t>(n), static_cast<std::size_t>(n)});
  }

  void edge(int u, int v) {
    m.data[static_cast<std::size_t>(u) * n + v] = 1;
    m.data[static_cast<std::size_t>(v) * n + u] = 1;
  }

  EdgeColoredGraph done() && {
    return make_graph(GraphFormat::AdjacencyColors, std::move(m));
  }
};

}  // namespace

EdgeColoredGraph monochromatic_graph(int order, int selected_color, int edge_colors,
                                     GraphKind kind) {
  if (order < 1) throw std::invalid_argument("graph order must be at least 1");
  if (selected_color < 0 || selected_color > edge_colors)
    throw std::invalid_argument("selected color out of range");
  U8Array m({static_cast<std::size_t>(order), static_cast<std::size_t>(order)});
  for (int u = 0; u < order; ++u)
    for (int v = 0; v < order; ++v)
      if (kind.allow_loops || u != v)
        m.data[static_cast<std::size_t>(u) * order + v] =
            static_cast<std::uint8_t>(selected_color);
  return make_graph(GraphFormat::AdjacencyColors, std::move(m), edge_colors, kind);
}

EdgeColoredGraph empty_graph(int order) { return monochromatic_graph(order, 0); }

EdgeColoredGraph complete_graph(int order) { return monochromatic_graph(order, 1); }

EdgeColoredGraph almost_complete_graph(int order) {
  Builder b(order, 2);
  for (int u = 0; u < order; ++u)
    for (int v = u + 1; v < order; ++v)
      if (!(u == 0 && v == 1)) b.edge(u, v);
  return std::move(b).done();
}

EdgeColoredGraph complete_bipartite_graph(int part_a, int part_b) {
  return complete_multipartite_graph({part_a, part_b});
}

EdgeColoredGraph complete_multipartite_graph(const std::vector<int>& part_sizes) {
  if (part_sizes.empty()) throw std::invalid_argument("at least one part is required");
  int n = 0;
  for (int p : part_sizes) {
    if (p < 1) throw std::invalid_argument("part sizes must be positive");
    n += p;
  }
  Builder b(n, 1);
  int start = 0;
  for (int p : part_sizes) {
    for (int u = start; u < start + p; ++u)
      for (int v = start + p; v < n; ++v) b.edge(u, v);
    start += p;
  }
  return std::move(b).done();
}

EdgeColoredGraph star_graph(int order) {
  Builder b(order, 2);
  for (int v = 1; v < order; ++v) b.edge(0, v);
  return std::move(b).done();
}

EdgeColoredGraph path_graph(int order) {
  Builder b(order, 2);
  for (int v = 1; v < order; ++v) b.edge(v - 1, v);
  return std::move(b).done();
}

EdgeColoredGraph cycle_graph(int order) {
  Builder b(order, 3);
  for (int v = 1; v < order; ++v) b.edge(v - 1, v);
  b.edge(order - 1, 0);
  return std::move(b).done();
}

EdgeColoredGraph wheel_graph(int order) {
  Builder b(order, 4);
  for (int v = 1; v < order; ++v) {
    b.edge(0, v);
    b.edge(v, v == order - 1 ? 1 : v + 1);
  }
  return std::move(b).done();
}

EdgeColoredGraph book_graph(int pages) {
  if (pages < 1) throw std::invalid_argument("a book needs at least one page");
  Builder b(pages + 2, 3);
  b.edge(0, 1);
  for (int v = 2; v < pages + 2; ++v) {
    b.edge(0, v);
    b.edge(1, v);
  }
  return std::move(b).done();
}

EdgeColoredGraph friendship_graph(int triangle_count) {
  if (triangle_count < 1)
    throw std::invalid_argument("a friendship graph needs at least one triangle");
  Builder b(2 * triangle_count + 1, 3);
  for (int t = 0; t < triangle_count; ++t) {
    int u = 2 * t + 1;
    b.edge(0, u);
    b.edge(0, u + 1);
    b.edge(u, u + 1);
  }
  return std::move(b).done();
}

}  // namespace graphrl
