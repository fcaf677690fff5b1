#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "graphrl/graph.hpp"
#include "graphrl/network.hpp"

// Independent reference implementations that the library code is checked
// against. These are written for clarity, not speed, and deliberately use
// different algorithms than the code under test.
namespace oracles {

// Slot traversal orders rebuilt by sorting all valid slots with an explicit
// key, instead of walking rows/layers.
std::vector<std::pair<int, int>> sorted_slot_sequence(int order, graphrl::GraphKind kind,
                                                      graphrl::EdgeOrdering ordering);

// Uniform random coloring over colors {0..k-1}, or {0..k} when
// allow_uncolored (color k marks an uncolored slot).
graphrl::EdgeColoredGraph random_graph(std::mt19937_64& rng, int k,
                                       graphrl::GraphKind kind, int n,
                                       bool allow_uncolored);

// All eigenvalues (with multiplicity, nondecreasing) of a symmetric matrix
// with n <= 4, found as characteristic-polynomial roots: coefficients by
// Faddeev-LeVerrier, roots by derivative-interleaved bisection.
std::vector<double> charpoly_eigenvalues(const std::vector<double>& matrix, int n);

// Maximum matching size by trying every subset of the edge set. n <= 20.
int exhaustive_matching(const std::vector<std::uint8_t>& adjacency, int n);

// Mostar index from its closer-vertex-counting definition, with distances
// by Floyd-Warshall. Returns -1 for disconnected input.
std::int64_t mostar_by_closer_counts(const std::vector<std::uint8_t>& adjacency, int n);

// Calls fn with the 0/1 adjacency matrix of every undirected simple graph
// of the given order (2^C(n,2) of them).
void for_each_graph(int n, const std::function<void(const std::vector<std::uint8_t>&)>& fn);

// Central-finite-difference gradients of an arbitrary scalar loss with
// respect to every network parameter. The loss closure must re-evaluate the
// network deterministically (evaluation mode).
struct NetworkGradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
};
NetworkGradients finite_difference_gradients(graphrl::PolicyNetwork& net,
                                             const std::function<double()>& loss,
                                             double step);

// ||analytic - numeric|| / max(||analytic||, ||numeric||, 1e-12) over all
// parameters at once.
double gradient_relative_error(const NetworkGradients& numeric,
                               const std::vector<Eigen::MatrixXd>& analytic_weights,
                               const std::vector<Eigen::VectorXd>& analytic_biases);

}  // namespace oracles
