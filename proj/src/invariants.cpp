#include "graphrl/invariants.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace graphrl {

namespace {

struct BatchView {
  const std::vector<std::uint8_t>* colors;
  std::size_t batch;
  int n;

  const std::uint8_t* element(std::size_t b) const {
    return colors->data() + b * static_cast<std::size_t>(n) * n;
  }
};

BatchView view(const EdgeColoredGraph& g) {
  return {&g.colors(), g.batch_size().value_or(1), g.order()};
}

// 0/1 adjacency of one element: entries with color 1.
std::vector<std::uint8_t> adjacency01(const BatchView& v, std::size_t b) {
  std::size_t nn = static_cast<std::size_t>(v.n) * v.n;
  std::vector<std::uint8_t> adj(nn);
  const std::uint8_t* m = v.element(b);
  for (std::size_t i = 0; i < nn; ++i) adj[i] = m[i] == 1;
  return adj;
}

bool connected01(const std::vector<std::uint8_t>& adj, int n) {
  std::vector<std::uint8_t> seen(n, 0);
  std::vector<int> queue{0};
  seen[0] = 1;
  int covered = 1;
  while (!queue.empty()) {
    int u = queue.back();
    queue.pop_back();
    for (int w = 0; w < n; ++w)
      if (!seen[w] && (adj[static_cast<std::size_t>(u) * n + w] ||
                       adj[static_cast<std::size_t>(w) * n + u])) {
        seen[w] = 1;
        ++covered;
        queue.push_back(w);
      }
  }
  return covered == n;
}

std::vector<int> degrees01(const std::vector<std::uint8_t>& adj, int n) {
  std::vector<int> d(n, 0);
  for (int u = 0; u < n; ++u)
    for (int w = 0; w < n; ++w) d[u] += adj[static_cast<std::size_t>(u) * n + w];
  return d;
}

ScoreVector truncate(const std::vector<double>& xs) {
  return ScoreVector(xs.begin(), xs.end());
}

}  // namespace

std::vector<double> symmetric_eigenvalues(std::vector<double> matrix, int n,
                                          std::vector<double>* eigenvectors) {
  if (n < 1) throw std::invalid_argument("matrix order must be positive");
  if (matrix.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("matrix data does not match order");
  auto& a = matrix;
  auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
  std::vector<double> q;
  if (eigenvectors) {
    q.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) q[static_cast<std::size_t>(i) * n + i] = 1.0;
  }
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int r = 0; r < n; ++r)
        if (p != r) off += at(p, r) * at(p, r);
    if (std::sqrt(off) < 1e-10) break;
    for (int p = 0; p < n - 1; ++p)
      for (int r = p + 1; r < n; ++r) {
        double apq = at(p, r);
        if (apq == 0.0) continue;
        double theta = 0.5 * std::atan2(2.0 * apq, at(r, r) - at(p, p));
        double c = std::cos(theta), s = std::sin(theta);
        double app = at(p, p), aqq = at(r, r);
        at(p, p) = c * c * app - 2.0 * s * c * apq + s * s * aqq;
        at(r, r) = s * s * app + 2.0 * s * c * apq + c * c * aqq;
        at(p, r) = 0.0;
        at(r, p) = 0.0;
        for (int i = 0; i < n; ++i) {
          if (i == p || i == r) continue;
          double aip = at(i, p), aiq = at(i, r);
          at(i, p) = c * aip - s * aiq;
          at(p, i) = at(i, p);
          at(i, r) = s * aip + c * aiq;
          at(r, i) = at(i, r);
        }
        if (eigenvectors)
          for (int i = 0; i < n; ++i) {
            double qip = q[static_cast<std::size_t>(i) * n + p];
            double qiq = q[static_cast<std::size_t>(i) * n + r];
            q[static_cast<std::size_t>(i) * n + p] = c * qip - s * qiq;
            q[static_cast<std::size_t>(i) * n + r] = s * qip + c * qiq;
          }
      }
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return at(i, i) < at(j, j); });
  std::vector<double> values(n);
  for (int i = 0; i < n; ++i) values[i] = at(order[i], order[i]);
  if (eigenvectors) {
    eigenvectors->assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        (*eigenvectors)[static_cast<std::size_t>(i) * n + j] =
            q[static_cast<std::size_t>(i) * n + order[j]];
  }
  return values;
}

std::vector<int> all_pairs_distances(const std::vector<std::uint8_t>& adjacency, int n) {
  if (adjacency.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("adjacency data does not match order");
  std::vector<int> dist(static_cast<std::size_t>(n) * n, -1);
  std::vector<int> queue;
  for (int s = 0; s < n; ++s) {
    int* row = dist.data() + static_cast<std::size_t>(s) * n;
    queue.assign(1, s);
    row[s] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      int u = queue[head];
      for (int w = 0; w < n; ++w)
        if (row[w] < 0 && adjacency[static_cast<std::size_t>(u) * n + w]) {
          row[w] = row[u] + 1;
          queue.push_back(w);
        }
    }
  }
  return dist;
}

namespace {

struct MatchingSearch {
  int n;
  int best = 0;
  std::vector<std::uint32_t> nbr;

  void run(int size) {
    best = std::max(best, size);
    std::uint32_t active = 0;
    for (int v = 0; v < n; ++v)
      if (nbr[v]) active |= std::uint32_t{1} << v;
    if (size + std::popcount(active) / 2 <= best) return;
    if (!active) return;
    // Edge at a highest-degree endpoint.
    int u = -1, du = -1;
    for (int v = 0; v < n; ++v) {
      int d = std::popcount(nbr[v]);
      if (d > du) {
        du = d;
        u = v;
      }
    }
    int w = -1, dw = -1;
    for (int v = 0; v < n; ++v)
      if ((nbr[u] >> v) & 1) {
        int d = std::popcount(nbr[v]);
        if (d > dw) {
          dw = d;
          w = v;
        }
      }
    // Include u-w: drop both endpoints.
    std::vector<std::uint32_t> saved = nbr;
    std::uint32_t clear = (std::uint32_t{1} << u) | (std::uint32_t{1} << w);
    for (int v = 0; v < n; ++v) nbr[v] &= ~clear;
    nbr[u] = 0;
    nbr[w] = 0;
    run(size + 1);
    nbr = saved;
    // Exclude the edge u-w.
    nbr[u] &= ~(std::uint32_t{1} << w);
    nbr[w] &= ~(std::uint32_t{1} << u);
    run(size);
    nbr = std::move(saved);
  }
};

}  // namespace

int maximum_matching_size(const std::vector<std::uint8_t>& adjacency, int n) {
  if (n > 32) throw std::invalid_argument("matching supports orders up to 32");
  if (adjacency.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("adjacency data does not match order");
  MatchingSearch search;
  search.n = n;
  search.nbr.assign(n, 0);
  for (int u = 0; u < n; ++u)
    for (int w = 0; w < n; ++w)
      if (u != w && adjacency[static_cast<std::size_t>(u) * n + w])
        search.nbr[u] |= std::uint32_t{1} << w;
  search.run(0);
  return search.best;
}

std::vector<double> degree_square_sum(const EdgeColoredGraph& batch) {
  BatchView v = view(batch);
  std::vector<double> out(v.batch);
  for (std::size_t b = 0; b < v.batch; ++b) {
    auto adj = adjacency01(v, b);
    double total = 0.0;
    for (int d : degrees01(adj, v.n)) total += static_cast<double>(d) * d;
    out[b] = total;
  }
  return out;
}

std::vector<double> zero_color_count_squared(const EdgeColoredGraph& batch) {
  BatchView v = view(batch);
  auto slots = edge_slot_order(v.n, batch.kind(), EdgeOrdering::RowMajor);
  std::vector<double> out(v.batch);
  for (std::size_t b = 0; b < v.batch; ++b) {
    const std::uint8_t* m = v.element(b);
    double count = 0.0;
    for (auto [u, w] : slots)
      if (m[static_cast<std::size_t>(u) * v.n + w] == 0) count += 1.0;
    out[b] = count * count;
  }
  return out;
}

std::vector<std::uint8_t> is_connected(const EdgeColoredGraph& batch) {
  BatchView v = view(batch);
  std::vector<std::uint8_t> out(v.batch);
  for (std::size_t b = 0; b < v.batch; ++b)
    out[b] = connected01(adjacency01(v, b), v.n);
  return out;
}

std::vector<double> laplacian_spectral_radius(const EdgeColoredGraph& batch) {
  BatchView v = view(batch);
  int n = v.n;
  std::vector<double> out(v.batch);
  for (std::size_t b = 0; b < v.batch; ++b) {
    auto adj = adjacency01(v, b);
    auto deg = degrees01(adj, n);
    std::vector<double> lap(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        lap[static_cast<std::size_t>(i) * n + j] =
            (i == j ? deg[i] : 0.0) - adj[static_cast<std::size_t>(i) * n + j];
    out[b] = symmetric_eigenvalues(std::move(lap), n).back();
  }
  return out;
}

std::vector<double> conjecture1_score(const EdgeColoredGraph& batch) {
  BatchView v = view(batch);
  int n = v.n;
  std::vector<double> out(v.batch);
  for (std::size_t b = 0; b < v.batch; ++b) {
    auto adj = adjacency01(v, b);
    if (!connected01(adj, n)) {
      out[b] = -10.0;
      continue;
    }
    auto deg = degrees01(adj, n);
    std::vector<double> lap(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        lap[static_cast<std::size_t>(i) * n + j] =
            (i == j ? deg[i] : 0.0) - adj[static_cast<std::size_t>(i) * n + j];
    double mu = symmetric_eigenvalues(std::move(lap), n).back();
    double bound = -1e300;
    for (int u = 0; u < n; ++u) {
      double d_fixed = std::max<double>(deg[u], 1.0);
      double m = 0.0;
      for (int w = 0; w < n; ++w)
        if (adj[static_cast<std::size_t>(u) * n + w]) m += deg[w];
      m /= d_fixed;
      double m_fixed = std::max(m, 1.0);
      bound = std::max(bound, m_fixed * m_fixed / d_fixed + m_fixed);
    }
    out[b] = mu - bound;
  }
  return out;
}

std::vector<double> graph_energy(const EdgeColoredGraph& batch) {
  BatchView v = view(batch);
  int n = v.n;
  std::vector<double> out(v.batch);
  for (std::size_t b = 0; b < v.batch; ++b) {
    auto adj = adjacency01(v, b);
    std::vector<double> a(adj.begin(), adj.end());
    double total = 0.0;
    for (double x : symmetric_eigenvalues(std::move(a), n)) total += std::abs(x);
    out[b] = total;
  }
  return out;
}

std::vector<int> matching_number(const EdgeColoredGraph& batch) {
  BatchView v = view(batch);
  std::vector<int> out(v.batch);
  for (std::size_t b = 0; b < v.batch; ++b)
    out[b] = maximum_matching_size(adjacency01(v, b), v.n);
  return out;
}

std::vector<double> energy_matching_score(const EdgeColoredGraph& batch) {
  BatchView v = view(batch);
  int n = v.n;
  std::vector<double> out(v.batch);
  for (std::size_t b = 0; b < v.batch; ++b) {
    auto adj = adjacency01(v, b);
    if (!connected01(adj, n)) {
      out[b] = -2000.0;
      continue;
    }
    auto deg = degrees01(adj, n);
    int delta = *std::max_element(deg.begin(), deg.end());
    if (delta > 5) {
      out[b] = -2000.0;
      continue;
    }
    int nu = maximum_matching_size(adj, n);
    std::vector<double> a(adj.begin(), adj.end());
    double energy = 0.0;
    for (double x : symmetric_eigenvalues(std::move(a), n)) energy += std::abs(x);
    out[b] = energy - 2.0 * nu * std::sqrt(static_cast<double>(delta));
  }
  return out;
}

std::vector<std::vector<std::int64_t>> transmissions(const EdgeColoredGraph& batch) {
  BatchView v = view(batch);
  int n = v.n;
  std::vector<std::vector<std::int64_t>> out(v.batch);
  for (std::size_t b = 0; b < v.batch; ++b) {
    auto adj = adjacency01(v, b);
    auto dist = all_pairs_distances(adj, n);
    std::vector<std::int64_t> t(n, 0);
    for (int u = 0; u < n; ++u)
      for (int w = 0; w < n; ++w) {
        int d = dist[static_cast<std::size_t>(u) * n + w];
        if (d < 0) throw std::invalid_argument("transmissions requires a connected graph");
        t[u] += d;
      }
    out[b] = std::move(t);
  }
  return out;
}

std::vector<double> mostar_index(const EdgeColoredGraph& batch) {
  BatchView v = view(batch);
  int n = v.n;
  auto trans = transmissions(batch);
  std::vector<double> out(v.batch);
  for (std::size_t b = 0; b < v.batch; ++b) {
    const std::uint8_t* m = v.element(b);
    const auto& t = trans[b];
    std::int64_t total = 0;
    for (int u = 0; u < n; ++u)
      for (int w = u + 1; w < n; ++w)
        if (m[static_cast<std::size_t>(u) * n + w] == 1)
          total += std::abs(t[u] - t[w]);
    out[b] = static_cast<double>(total);
  }
  return out;
}

std::vector<double> monochromatic_directed_triangles(const EdgeColoredGraph& batch,
                                                     const std::vector<int>& colors) {
  BatchView v = view(batch);
  int n = v.n;
  std::vector<double> out(v.batch, 0.0);
  for (std::size_t b = 0; b < v.batch; ++b) {
    const std::uint8_t* m = v.element(b);
    std::int64_t triple = 0;
    for (int c : colors) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (m[static_cast<std::size_t>(i) * n + j] != c) continue;
          for (int l = 0; l < n; ++l)
            if (m[static_cast<std::size_t>(j) * n + l] == c &&
                m[static_cast<std::size_t>(l) * n + i] == c)
              ++triple;
        }
    }
    out[b] = static_cast<double>(triple) / 3.0;
  }
  return out;
}

Invariant penalize_disconnected(Invariant inner, double penalty) {
  Invariant out;
  out.name = inner.name;
  auto f = inner.f;
  auto p = static_cast<float>(penalty);
  out.f = [f, p](const EdgeColoredGraph& batch) {
    ScoreVector scores = f(batch);
    auto connected = is_connected(batch);
    for (std::size_t b = 0; b < scores.size(); ++b)
      if (!connected[b]) scores[b] = p;
    return scores;
  };
  return out;
}

struct InvariantRegistry::State {
  mutable std::mutex mutex;
  std::map<std::string, Invariant> entries;
};

InvariantRegistry& InvariantRegistry::instance() {
  static InvariantRegistry registry;
  return registry;
}

InvariantRegistry::InvariantRegistry() : state_(std::make_shared<State>()) {
  auto wrap = [](std::string name, std::vector<double> (*fn)(const EdgeColoredGraph&)) {
    Invariant inv;
    inv.name = std::move(name);
    inv.f = [fn](const EdgeColoredGraph& batch) { return truncate(fn(batch)); };
    return inv;
  };
  register_invariant(wrap("degree_square_sum", &degree_square_sum));
  register_invariant(wrap("zero_color_count_squared", &zero_color_count_squared));
  register_invariant(wrap("conjecture1", &conjecture1_score));
  register_invariant(wrap("energy_matching", &energy_matching_score));
  {
    Invariant mostar = wrap("mostar", &mostar_index);
    // Base formula needs connectivity; the registered form penalizes instead.
    auto raw = [](const EdgeColoredGraph& batch) {
      auto connected = is_connected(batch);
      ScoreVector scores(connected.size(), -2000.0f);
      std::vector<std::size_t> keep;
      for (std::size_t b = 0; b < connected.size(); ++b)
        if (connected[b]) keep.push_back(b);
      if (keep.size() == connected.size()) {
        return truncate(mostar_index(batch));
      }
      if (!keep.empty()) {
        // Mixed batch: score elements one by one.
        for (std::size_t b : keep) {
          EdgeColoredGraph single =
              batch.batch_size() ? batch.select(b) : batch;
          scores[b] = static_cast<float>(mostar_index(single)[0]);
        }
      }
      return scores;
    };
    mostar.f = raw;
    register_invariant(std::move(mostar));
  }
  {
    Invariant tri;
    tri.name = "mono_triangles";
    tri.f = [](const EdgeColoredGraph& batch) {
      return truncate(monochromatic_directed_triangles(batch, {1, 2}));
    };
    register_invariant(std::move(tri));
  }
}

void InvariantRegistry::register_invariant(Invariant inv) {
  if (inv.name.empty()) throw std::invalid_argument("invariant name must not be empty");
  if (!inv.f) throw std::invalid_argument("invariant function must be set");
  std::lock_guard<std::mutex> lock(state_->mutex);
  auto [it, inserted] = state_->entries.emplace(inv.name, std::move(inv));
  if (!inserted)
    throw std::invalid_argument("invariant already registered: " + it->first);
}

Invariant InvariantRegistry::lookup(const std::string& name) const {
  std::lock_guard<std::mutex> lock(state_->mutex);
  auto it = state_->entries.find(name);
  if (it == state_->entries.end())
    throw std::invalid_argument("unknown invariant: " + name);
  return it->second;
}

bool InvariantRegistry::contains(const std::string& name) const {
  std::lock_guard<std::mutex> lock(state_->mutex);
  return state_->entries.count(name) > 0;
}

std::vector<std::string> InvariantRegistry::names() const {
  std::lock_guard<std::mutex> lock(state_->mutex);
  std::vector<std::string> out;
  for (const auto& [name, inv] : state_->entries) out.push_back(name);
  return out;
}

}  // namespace graphrl
