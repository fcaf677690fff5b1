#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "graphrl/graph.hpp"

namespace graphrl {

// Scores cross module boundaries as float32; all arithmetic behind them runs
// in float64.
using ScoreVector = std::vector<float>;

// A named batched graph invariant. f maps a graph batch to one score per
// element. delta, when set, returns element-wise score differences between
// two equally shaped batches (used for incremental evaluation).
struct Invariant {
  std::string name;
  std::function<ScoreVector(const EdgeColoredGraph&)> f;
  std::function<ScoreVector(const EdgeColoredGraph&, const EdgeColoredGraph&)> delta;
};

// ---- numeric kernels ----

// Eigenvalues of a symmetric matrix (flat row-major n*n), nondecreasing.
// Cyclic Jacobi rotations; converged when the off-diagonal Frobenius norm
// drops below 1e-10, capped at 100 sweeps. If eigenvectors is non-null it
// receives the column eigenvectors Q (flat n*n) with M = Q diag(w) Q^T.
std::vector<double> symmetric_eigenvalues(std::vector<double> matrix, int n,
                                          std::vector<double>* eigenvectors = nullptr);

// All-pairs shortest-path lengths on a 0/1 adjacency matrix (flat n*n) via
// per-source BFS; unreachable pairs get -1.
std::vector<int> all_pairs_distances(const std::vector<std::uint8_t>& adjacency, int n);

// Exact maximum matching size via branch and bound: branch on an edge at a
// highest-degree endpoint (include/exclude), prune with the half-active-
// vertices bound. Supports n <= 32.
int maximum_matching_size(const std::vector<std::uint8_t>& adjacency, int n);

// ---- batched invariants (double precision) ----
// These treat color 1 of a 2-colored undirected graph as "edge present".

std::vector<double> degree_square_sum(const EdgeColoredGraph& batch);
std::vector<double> zero_color_count_squared(const EdgeColoredGraph& batch);
std::vector<std::uint8_t> is_connected(const EdgeColoredGraph& batch);
std::vector<double> laplacian_spectral_radius(const EdgeColoredGraph& batch);
// mu(G) - max_v (m(v)^2 / d(v) + m(v)) with d and m floored at 1;
// -10 for disconnected graphs. Positive scores refute the bound.
std::vector<double> conjecture1_score(const EdgeColoredGraph& batch);
std::vector<double> graph_energy(const EdgeColoredGraph& batch);
std::vector<int> matching_number(const EdgeColoredGraph& batch);
// E(G) - 2 nu(G) sqrt(maxdeg(G)); -2000 if disconnected or maxdeg > 5.
std::vector<double> energy_matching_score(const EdgeColoredGraph& batch);
// T(v) = sum of distances from v; requires connected input.
std::vector<std::vector<std::int64_t>> transmissions(const EdgeColoredGraph& batch);
// Mo(G) = sum over edges uv of |T(u) - T(v)|; requires connected input.
std::vector<double> mostar_index(const EdgeColoredGraph& batch);
// Sum over c in colors of trace(A_c^3)/3 on a directed batch.
std::vector<double> monochromatic_directed_triangles(const EdgeColoredGraph& batch,
                                                     const std::vector<int>& colors);

// Inner invariant where connected, penalty elsewhere.
Invariant penalize_disconnected(Invariant inner, double penalty);

// ---- registry ----

// Name-keyed invariant lookup. Pre-registered: degree_square_sum,
// zero_color_count_squared, conjecture1, energy_matching, mostar,
// mono_triangles.
class InvariantRegistry {
 public:
  static InvariantRegistry& instance();

  void register_invariant(Invariant inv);  // throws on duplicate name
  Invariant lookup(const std::string& name) const;  // throws on unknown name
  bool contains(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  InvariantRegistry();
  struct State;
  std::shared_ptr<State> state_;
};

}  // namespace graphrl
