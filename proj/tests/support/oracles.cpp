#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace oracles {

using graphrl::EdgeOrdering;
using graphrl::GraphKind;

std::vector<std::pair<int, int>> sorted_slot_sequence(int order, GraphKind kind,
                                                      EdgeOrdering ordering) {
  std::vector<std::pair<int, int>> slots;
  for (int u = 0; u < order; ++u)
    for (int v = 0; v < order; ++v) {
      if (!kind.allow_loops && u == v) continue;
      if (!kind.is_directed && u > v) continue;
      slots.emplace_back(u, v);
    }
  auto key = [&](std::pair<int, int> s) {
    auto [u, v] = s;
    if (ordering == EdgeOrdering::RowMajor) return std::make_tuple(u, 0, v);
    int layer = std::max(u, v);
    // Within a layer: first down the column (0,L)...(L,L), then back along
    // the row (L,L-1)...(L,0).
    if (v == layer && (u < layer || kind.allow_loops)) return std::make_tuple(layer, 0, u);
    return std::make_tuple(layer, 1, layer - 1 - v);
  };
  std::stable_sort(slots.begin(), slots.end(),
                   [&](auto a, auto b) { return key(a) < key(b); });
  return slots;
}

graphrl::EdgeColoredGraph random_graph(std::mt19937_64& rng, int k, GraphKind kind,
                                       int n, bool allow_uncolored) {
  std::uniform_int_distribution<int> color(0, allow_uncolored ? k : k - 1);
  graphrl::U8Array m({static_cast<std::size_t>(n), static_cast<std::size_t>(n)});
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (!kind.allow_loops && u == v) continue;
      if (!kind.is_directed && u > v) continue;
      auto c = static_cast<std::uint8_t>(color(rng));
      m.data[static_cast<std::size_t>(u) * n + v] = c;
      if (!kind.is_directed) m.data[static_cast<std::size_t>(v) * n + u] = c;
    }
  return graphrl::make_graph(graphrl::GraphFormat::AdjacencyColors, std::move(m), k, kind);
}

namespace {

// p(x) for a monic polynomial given by coefficients [1, c1, ..., cd].
double poly_eval(const std::vector<double>& c, double x) {
  double value = 0.0;
  for (double ci : c) value = value * x + ci;
  return value;
}

double bisect_root(const std::vector<double>& c, double lo, double hi) {
  double flo = poly_eval(c, lo);
  for (int iter = 0; iter < 200; ++iter) {
    double mid = 0.5 * (lo + hi);
    double fmid = poly_eval(c, mid);
    if (fmid == 0.0) return mid;
    if ((flo < 0) == (fmid < 0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-14 * std::max(1.0, std::abs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

// All roots (with multiplicity, sorted) of a monic polynomial known to have
// only real roots. Roots of the derivative partition the line into monotone
// pieces; each sign change yields a simple root, and a derivative root r
// with p(r) ~ 0 is a root of multiplicity one higher than it has in p'.
std::vector<double> real_roots(const std::vector<double>& c) {
  std::size_t d = c.size() - 1;
  if (d == 0) return {};
  if (d == 1) return {-c[1]};
  std::vector<double> deriv(d);
  for (std::size_t i = 0; i < d; ++i)
    deriv[i] = c[i] * static_cast<double>(d - i) / static_cast<double>(d);
  std::vector<double> dr = real_roots(deriv);

  double bound = 1.0;
  for (double ci : c) bound = std::max(bound, std::abs(ci));
  bound = bound + 1.0;
  double scale = 1.0;
  for (double ci : c) scale = std::max(scale, std::abs(ci));

  std::vector<double> pts{-bound};
  for (double r : dr)
    if (pts.empty() || r > pts.back() + 1e-9) pts.push_back(r);
  pts.push_back(bound);

  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double fa = poly_eval(c, pts[i]);
    double fb = poly_eval(c, pts[i + 1]);
    if (std::abs(fa) <= 1e-8 * scale || std::abs(fb) <= 1e-8 * scale) continue;
    if ((fa < 0) != (fb < 0)) roots.push_back(bisect_root(c, pts[i], pts[i + 1]));
  }
  // A root of multiplicity m in p appears m-1 times in p'.
  for (std::size_t i = 0; i < dr.size();) {
    std::size_t j = i;
    while (j < dr.size() && dr[j] <= dr[i] + 1e-9) ++j;
    if (std::abs(poly_eval(c, dr[i])) <= 1e-8 * scale)
      roots.insert(roots.end(), j - i + 1, dr[i]);
    i = j;
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

std::vector<double> charpoly_eigenvalues(const std::vector<double>& matrix, int n) {
  if (n < 1 || n > 4) throw std::invalid_argument("charpoly oracle handles n in 1..4");
  auto at = [&](const std::vector<double>& m, int i, int j) {
    return m[static_cast<std::size_t>(i) * n + j];
  };
  // Faddeev-LeVerrier: M1 = A, c1 = -tr(M1); M_{j+1} = A(M_j + c_j I).
  std::vector<double> coeffs{1.0};
  std::vector<double> m = matrix;
  for (int j = 1; j <= n; ++j) {
    double trace = 0.0;
    for (int i = 0; i < n; ++i) trace += at(m, i, i);
    double cj = -trace / j;
    coeffs.push_back(cj);
    if (j == n) break;
    std::vector<double> next(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l)
        for (int p = 0; p < n; ++p)
          next[static_cast<std::size_t>(i) * n + p] += at(matrix, i, l) * at(m, l, p) +
                                                       (l == p ? at(matrix, i, l) * cj : 0.0);
    // (The cj term above adds A * cj I exactly once per (i, p) pair.)
    m = std::move(next);
  }
  std::vector<double> roots = real_roots(coeffs);
  if (roots.size() != static_cast<std::size_t>(n))
    throw std::runtime_error("charpoly oracle lost a root");
  return roots;
}

int exhaustive_matching(const std::vector<std::uint8_t>& adjacency, int n) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (adjacency[static_cast<std::size_t>(u) * n + v]) edges.emplace_back(u, v);
  if (edges.size() > 20) throw std::invalid_argument("too many edges for exhaustive matching");
  int best = 0;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << edges.size()); ++mask) {
    std::uint32_t used = 0;
    int size = 0;
    bool ok = true;
    for (std::size_t i = 0; i < edges.size() && ok; ++i)
      if ((mask >> i) & 1) {
        std::uint32_t ends = (std::uint32_t{1} << edges[i].first) |
                             (std::uint32_t{1} << edges[i].second);
        if (used & ends)
          ok = false;
        else {
          used |= ends;
          ++size;
        }
      }
    if (ok) best = std::max(best, size);
  }
  return best;
}

std::int64_t mostar_by_closer_counts(const std::vector<std::uint8_t>& adjacency, int n) {
  constexpr int kFar = 1 << 20;
  std::vector<int> dist(static_cast<std::size_t>(n) * n, kFar);
  for (int u = 0; u < n; ++u) {
    dist[static_cast<std::size_t>(u) * n + u] = 0;
    for (int v = 0; v < n; ++v)
      if (adjacency[static_cast<std::size_t>(u) * n + v])
        dist[static_cast<std::size_t>(u) * n + v] = 1;
  }
  for (int via = 0; via < n; ++via)
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        int relaxed = dist[static_cast<std::size_t>(u) * n + via] +
                      dist[static_cast<std::size_t>(via) * n + v];
        if (relaxed < dist[static_cast<std::size_t>(u) * n + v])
          dist[static_cast<std::size_t>(u) * n + v] = relaxed;
      }
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (dist[static_cast<std::size_t>(u) * n + v] >= kFar) return -1;
  std::int64_t total = 0;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      if (!adjacency[static_cast<std::size_t>(u) * n + v]) continue;
      int closer_u = 0, closer_v = 0;
      for (int w = 0; w < n; ++w) {
        int du = dist[static_cast<std::size_t>(w) * n + u];
        int dv = dist[static_cast<std::size_t>(w) * n + v];
        if (du < dv) ++closer_u;
        if (dv < du) ++closer_v;
      }
      total += std::abs(closer_u - closer_v);
    }
  return total;
}

void for_each_graph(int n, const std::function<void(const std::vector<std::uint8_t>&)>& fn) {
  std::vector<std::pair<int, int>> pairs;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  if (pairs.size() >= 31) throw std::invalid_argument("order too large to enumerate");
  std::vector<std::uint8_t> adj(static_cast<std::size_t>(n) * n);
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << pairs.size()); ++mask) {
    std::fill(adj.begin(), adj.end(), 0);
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if ((mask >> i) & 1) {
        auto [u, v] = pairs[i];
        adj[static_cast<std::size_t>(u) * n + v] = 1;
        adj[static_cast<std::size_t>(v) * n + u] = 1;
      }
    fn(adj);
  }
}

NetworkGradients finite_difference_gradients(graphrl::PolicyNetwork& net,
                                             const std::function<double()>& loss,
                                             double step) {
  NetworkGradients out;
  auto probe = [&](double& parameter) {
    double saved = parameter;
    parameter = saved + step;
    double upper = loss();
    parameter = saved - step;
    double lower = loss();
    parameter = saved;
    return (upper - lower) / (2.0 * step);
  };
  for (Eigen::MatrixXd& w : net.weights()) {
    Eigen::MatrixXd grad(w.rows(), w.cols());
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) grad(r, c) = probe(w(r, c));
    out.weights.push_back(std::move(grad));
  }
  for (Eigen::VectorXd& b : net.biases()) {
    Eigen::VectorXd grad(b.size());
    for (Eigen::Index i = 0; i < b.size(); ++i) grad[i] = probe(b[i]);
    out.biases.push_back(std::move(grad));
  }
  return out;
}

double gradient_relative_error(const NetworkGradients& numeric,
                               const std::vector<Eigen::MatrixXd>& analytic_weights,
                               const std::vector<Eigen::VectorXd>& analytic_biases) {
  double difference = 0.0;
  double numeric_norm = 0.0;
  double analytic_norm = 0.0;
  for (std::size_t i = 0; i < numeric.weights.size(); ++i) {
    difference += (numeric.weights[i] - analytic_weights[i]).squaredNorm();
    numeric_norm += numeric.weights[i].squaredNorm();
    analytic_norm += analytic_weights[i].squaredNorm();
  }
  for (std::size_t i = 0; i < numeric.biases.size(); ++i) {
    difference += (numeric.biases[i] - analytic_biases[i]).squaredNorm();
    numeric_norm += numeric.biases[i].squaredNorm();
    analytic_norm += analytic_biases[i].squaredNorm();
  }
  double scale = std::max({std::sqrt(numeric_norm), std::sqrt(analytic_norm), 1e-12});
  return std::sqrt(difference) / scale;
}

}  // namespace oracles
