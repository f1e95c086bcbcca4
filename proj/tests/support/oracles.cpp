#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace oracle {

using venuenet::Graph;

int smith_waterman(std::string_view a, std::string_view b, const venuenet::AlignmentScoring& s) {
  std::vector<std::vector<int>> h(a.size() + 1, std::vector<int>(b.size() + 1, 0));
  int best = 0;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const int diag = h[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? s.match : s.mismatch);
      h[i][j] = std::max({0, diag, h[i - 1][j] + s.gap, h[i][j - 1] + s.gap});
      best = std::max(best, h[i][j]);
    }
  }
  return best;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Dense arc-length matrix; kInf where there is no arc.
std::vector<std::vector<double>> arc_lengths(const Graph& g, bool weighted) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<double>> len(n, std::vector<double>(n, kInf));
  for (const auto& e : g.edges()) {
    const double l = weighted ? 1.0 / e.weight : 1.0;
    len[e.source][e.target] = l;
    if (!g.directed()) len[e.target][e.source] = l;
  }
  return len;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

std::vector<std::vector<bool>> undirected_adjacency(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (const auto& e : g.edges()) adj[e.source][e.target] = adj[e.target][e.source] = true;
  return adj;
}

}  // namespace

std::vector<double> betweenness(const Graph& g, bool weighted, bool normalized) {
  const std::size_t n = g.node_count();
  const auto len = arc_lengths(g, weighted);
  auto dist = len;
  for (std::size_t i = 0; i < n; ++i) dist[i][i] = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (dist[i][k] + dist[k][j] < dist[i][j]) dist[i][j] = dist[i][k] + dist[k][j];

  std::vector<double> b(n, 0.0);
  std::vector<std::size_t> path;
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      if (s == t || dist[s][t] == kInf) continue;
      std::vector<std::vector<std::size_t>> paths;
      std::function<void(std::size_t, double)> walk = [&](std::size_t u, double d) {
        if (u == t) {
          paths.push_back(path);
          return;
        }
        for (std::size_t v = 0; v < n; ++v) {
          if (len[u][v] == kInf) continue;
          const double dv = d + len[u][v];
          if (!close(dv, dist[s][v]) || !close(dv + dist[v][t], dist[s][t])) continue;
          path.push_back(v);
          walk(v, dv);
          path.pop_back();
        }
      };
      path = {s};
      walk(s, 0.0);
      for (const auto& p : paths) {
        for (std::size_t k = 1; k + 1 < p.size(); ++k) b[p[k]] += 1.0 / static_cast<double>(paths.size());
      }
    }
  }
  if (!g.directed()) {
    for (double& v : b) v /= 2.0;
  }
  if (normalized) {
    const double nn = static_cast<double>(n);
    const double pairs = n < 3 ? 0.0 : (nn - 1) * (nn - 2) / (g.directed() ? 1.0 : 2.0);
    for (double& v : b) v = pairs > 0 ? v / pairs : 0.0;
  }
  return b;
}

double density(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n < 2) return 0.0;
  std::size_t present = 0, possible = 0;
  std::vector<std::vector<bool>> arc(n, std::vector<bool>(n, false));
  for (const auto& e : g.edges()) {
    arc[e.source][e.target] = true;
    if (!g.directed()) arc[e.target][e.source] = true;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || (!g.directed() && j < i)) continue;
      ++possible;
      if (arc[i][j]) ++present;
    }
  }
  return static_cast<double>(present) / static_cast<double>(possible);
}

std::vector<double> local_clustering(const Graph& g) {
  const std::size_t n = g.node_count();
  const auto adj = undirected_adjacency(g);
  std::vector<double> c(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<std::size_t> nb;
    for (std::size_t u = 0; u < n; ++u)
      if (adj[v][u]) nb.push_back(u);
    if (nb.size() < 2) continue;
    std::size_t closed = 0, triples = 0;
    for (std::size_t x = 0; x < nb.size(); ++x) {
      for (std::size_t y = x + 1; y < nb.size(); ++y) {
        ++triples;
        if (adj[nb[x]][nb[y]]) ++closed;
      }
    }
    c[v] = static_cast<double>(closed) / static_cast<double>(triples);
  }
  return c;
}

double average_clustering(const Graph& g) {
  const auto c = local_clustering(g);
  if (c.empty()) return 0.0;
  double s = 0.0;
  for (double x : c) s += x;
  return s / static_cast<double>(c.size());
}

double largest_component_fraction(const Graph& g) {
  const std::size_t n = g.node_count();
  const auto adj = undirected_adjacency(g);
  std::vector<bool> seen(n, false);
  std::size_t best = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    std::size_t size = 0;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      ++size;
      for (std::size_t v = 0; v < n; ++v) {
        if (adj[u][v] && !seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
    best = std::max(best, size);
  }
  return n ? static_cast<double>(best) / static_cast<double>(n) : 0.0;
}

double modularity(const Graph& g, const std::vector<std::size_t>& cluster, bool weighted) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (const auto& e : g.edges()) {
    const double w = weighted ? e.weight : 1.0;
    a[e.source][e.target] += w;
    a[e.target][e.source] += w;
  }
  std::vector<double> k(n, 0.0);
  double two_m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) k[i] += a[i][j];
    two_m += k[i];
  }
  if (two_m == 0.0) return 0.0;
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (cluster[i] == cluster[j]) q += a[i][j] - k[i] * k[j] / two_m;
  return q / two_m;
}

BestPartition best_partition(const Graph& g, bool weighted) {
  const std::size_t n = g.node_count();
  BestPartition best{std::vector<std::size_t>(n, 0), -kInf};
  std::vector<std::size_t> rgs(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (i == n) {
      const double q = modularity(g, rgs, weighted);
      if (q > best.q) best = {rgs, q};
      return;
    }
    for (std::size_t c = 0; c <= used; ++c) {
      rgs[i] = c;
      rec(i + 1, std::max(used, c + 1));
    }
  };
  if (n == 0) return {{}, 0.0};
  rec(0, 0);
  return best;
}

double pagerank_residual(const Graph& g, const std::vector<double>& p, double d) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<std::size_t>> out(n);
  for (const auto& e : g.edges()) {
    out[e.source].push_back(e.target);
    if (!g.directed()) out[e.target].push_back(e.source);
  }
  std::vector<double> t(n, 1.0 - d);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i : out[j]) t[i] += d * p[j] / static_cast<double>(out[j].size());
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i) r = std::max(r, std::abs(t[i] - p[i]));
  return r;
}

}  // namespace oracle
