#include "venuenet/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <queue>

#include "venuenet/error.hpp"
#include "venuenet/text.hpp"

namespace venuenet {

double MetricVector::max() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, v);
  return m;
}

std::vector<std::pair<std::string, double>> MetricVector::ranked() const {
  std::vector<std::pair<std::string, double>> out;
  out.reserve(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) out.emplace_back(keys[i], values[i]);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  return out;
}

namespace metrics {
namespace {

MetricVector make_vector(const Graph& g, std::string name, std::vector<double> values) {
  MetricVector mv;
  mv.metric = std::move(name);
  mv.keys.reserve(g.node_count());
  for (const auto& n : g.nodes()) mv.keys.push_back(n.key);
  mv.values = std::move(values);
  mv.graph_fingerprint = g.fingerprint();
  return mv;
}

// Two path lengths closer than this (relative) are the same length.
constexpr double kTieTolerance = 1e-12;

bool same_length(double a, double b) { return std::abs(a - b) <= kTieTolerance * std::max(a, b); }

struct BrandesWorkspace {
  explicit BrandesWorkspace(std::size_t n)
      : sigma(n), dist(n), delta(n), preds(n), settled(n) {}
  std::vector<double> sigma, dist, delta;
  std::vector<std::vector<std::size_t>> preds;
  std::vector<char> settled;
  std::vector<std::size_t> order;  // nodes in non-decreasing distance
};

// Single-source shortest-path DAG and dependency accumulation; adds the
// dependencies of `source` to `acc`.
void accumulate_source(const Adjacency& adj, bool weighted, std::size_t source, BrandesWorkspace& w,
                       std::vector<double>& acc) {
  std::fill(w.sigma.begin(), w.sigma.end(), 0.0);
  std::fill(w.dist.begin(), w.dist.end(), -1.0);
  std::fill(w.delta.begin(), w.delta.end(), 0.0);
  std::fill(w.settled.begin(), w.settled.end(), 0);
  for (auto& p : w.preds) p.clear();
  w.order.clear();
  w.sigma[source] = 1.0;
  w.dist[source] = 0.0;

  if (!weighted) {
    std::queue<std::size_t> queue;
    queue.push(source);
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop();
      w.order.push_back(v);
      for (std::size_t k = adj.out_offsets[v]; k < adj.out_offsets[v + 1]; ++k) {
        const std::size_t u = adj.out_targets[k];
        if (w.dist[u] < 0.0) {
          w.dist[u] = w.dist[v] + 1.0;
          queue.push(u);
        }
        if (w.dist[u] == w.dist[v] + 1.0) {
          w.sigma[u] += w.sigma[v];
          w.preds[u].push_back(v);
        }
      }
    }
  } else {
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
      const auto [d, v] = heap.top();
      heap.pop();
      if (w.settled[v] || d != w.dist[v]) continue;
      w.settled[v] = 1;
      w.order.push_back(v);
      for (std::size_t k = adj.out_offsets[v]; k < adj.out_offsets[v + 1]; ++k) {
        const std::size_t u = adj.out_targets[k];
        if (w.settled[u]) continue;
        const double alt = d + 1.0 / adj.out_weights[k];
        if (w.dist[u] < 0.0 || (alt < w.dist[u] && !same_length(alt, w.dist[u]))) {
          w.dist[u] = alt;
          w.sigma[u] = w.sigma[v];
          w.preds[u].assign(1, v);
          heap.emplace(alt, u);
        } else if (same_length(alt, w.dist[u])) {
          w.sigma[u] += w.sigma[v];
          w.preds[u].push_back(v);
        }
      }
    }
  }

  for (auto it = w.order.rbegin(); it != w.order.rend(); ++it) {
    const std::size_t u = *it;
    for (std::size_t v : w.preds[u]) w.delta[v] += w.sigma[v] / w.sigma[u] * (1.0 + w.delta[u]);
    if (u != source) acc[u] += w.delta[u];
  }
}

// Sources are cut into fixed blocks independent of the thread count; block
// partials are reduced in block order so the result does not depend on the
// schedule, and the serial kernel sums in the same order.
std::size_t source_block(std::size_t n) { return std::max<std::size_t>(16, (n + 255) / 256); }

std::vector<double> brandes_serial(const Adjacency& adj, bool weighted) {
  const std::size_t n = adj.n;
  std::vector<double> acc(n, 0.0), part(n);
  BrandesWorkspace w(n);
  for (std::size_t lo = 0; lo < n; lo += source_block(n)) {
    std::fill(part.begin(), part.end(), 0.0);
    for (std::size_t s = lo; s < std::min(n, lo + source_block(n)); ++s) accumulate_source(adj, weighted, s, w, part);
    for (std::size_t v = 0; v < n; ++v) acc[v] += part[v];
  }
  return acc;
}

std::vector<double> brandes_parallel(const Adjacency& adj, bool weighted) {
  const std::size_t n = adj.n;
  const std::size_t block = source_block(n);
  const std::size_t blocks = (n + block - 1) / block;
  std::vector<std::vector<double>> partial(blocks);
#pragma omp parallel
  {
    BrandesWorkspace w(n);
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
      std::vector<double> acc(n, 0.0);
      const std::size_t lo = static_cast<std::size_t>(b) * block;
      const std::size_t hi = std::min(n, lo + block);
      for (std::size_t s = lo; s < hi; ++s) accumulate_source(adj, weighted, s, w, acc);
      partial[b] = std::move(acc);
    }
  }
  std::vector<double> acc(n, 0.0);
  for (const auto& p : partial) {
    for (std::size_t v = 0; v < n; ++v) acc[v] += p[v];
  }
  return acc;
}

std::vector<std::size_t> neighbour_sets(const Adjacency& adj, std::vector<std::size_t>& offsets) {
  // Sorted unique neighbourhoods ignoring direction.
  std::vector<std::size_t> flat;
  offsets.assign(adj.n + 1, 0);
  std::vector<std::size_t> tmp;
  for (std::size_t v = 0; v < adj.n; ++v) {
    tmp.assign(adj.out_targets.begin() + adj.out_offsets[v], adj.out_targets.begin() + adj.out_offsets[v + 1]);
    tmp.insert(tmp.end(), adj.in_sources.begin() + adj.in_offsets[v], adj.in_sources.begin() + adj.in_offsets[v + 1]);
    std::sort(tmp.begin(), tmp.end());
    tmp.erase(std::unique(tmp.begin(), tmp.end()), tmp.end());
    flat.insert(flat.end(), tmp.begin(), tmp.end());
    offsets[v + 1] = flat.size();
  }
  return flat;
}

}  // namespace

double density(const Graph& g) {
  const double n = static_cast<double>(g.node_count());
  if (g.node_count() <= 1) return 0.0;
  const double m = static_cast<double>(g.edge_count());
  return (g.directed() ? m : 2.0 * m) / (n * (n - 1.0));
}

std::vector<double> local_clustering(const Graph& g) {
  const Adjacency adj = Adjacency::of(g);
  std::vector<std::size_t> offsets;
  const std::vector<std::size_t> nb = neighbour_sets(adj, offsets);
  std::vector<double> c(adj.n, 0.0);
  std::vector<char> mark(adj.n, 0);
  for (std::size_t v = 0; v < adj.n; ++v) {
    const std::size_t k = offsets[v + 1] - offsets[v];
    if (k < 2) continue;
    for (std::size_t i = offsets[v]; i < offsets[v + 1]; ++i) mark[nb[i]] = 1;
    std::size_t links = 0;
    for (std::size_t i = offsets[v]; i < offsets[v + 1]; ++i) {
      const std::size_t u = nb[i];
      for (std::size_t j = offsets[u]; j < offsets[u + 1]; ++j) {
        if (nb[j] > u && mark[nb[j]]) ++links;
      }
    }
    for (std::size_t i = offsets[v]; i < offsets[v + 1]; ++i) mark[nb[i]] = 0;
    c[v] = static_cast<double>(links) / (static_cast<double>(k) * static_cast<double>(k - 1) / 2.0);
  }
  return c;
}

double average_clustering_coefficient(const Graph& g) {
  if (g.node_count() == 0) return 0.0;
  const auto c = local_clustering(g);
  return std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(c.size());
}

MetricVector betweenness_centrality(const Graph& g, const BetweennessOptions& options) {
  for (const auto& e : g.edges()) {
    if (!(e.weight > 0.0)) throw InputError("betweenness requires positive edge weights");
  }
  const Adjacency adj = Adjacency::of(g);
  std::vector<double> b = options.execution == Execution::Parallel ? brandes_parallel(adj, options.weighted)
                                                                   : brandes_serial(adj, options.weighted);
  const double n = static_cast<double>(g.node_count());
  if (!g.directed()) {
    for (double& v : b) v /= 2.0;
  }
  if (options.normalized) {
    const double pairs = g.node_count() < 3 ? 0.0 : (n - 1.0) * (n - 2.0) / (g.directed() ? 1.0 : 2.0);
    for (double& v : b) v = pairs > 0.0 ? v / pairs : 0.0;
  }
  return make_vector(g, options.normalized ? "betweenness_normalized" : "betweenness", std::move(b));
}

PageRankResult pagerank(const Graph& g, const PageRankOptions& options) {
  if (!(options.damping > 0.0 && options.damping < 1.0)) throw InputError("damping factor must lie in (0, 1)");
  if (!(options.tolerance > 0.0)) throw InputError("tolerance must be positive");
  if (options.max_iterations <= 0) throw InputError("max_iterations must be positive");

  const Adjacency adj = Adjacency::of(g);
  const auto n = static_cast<std::int64_t>(adj.n);
  const double d = options.damping;
  const bool parallel = options.execution == Execution::Parallel;
  std::vector<double> cur(adj.n, 1.0), next(adj.n, 0.0);

  auto apply = [&] {
    double change = 0.0;
#pragma omp parallel for schedule(static) reduction(max : change) if (parallel)
    for (std::int64_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (std::size_t k = adj.in_offsets[i]; k < adj.in_offsets[i + 1]; ++k) {
        const std::size_t j = adj.in_sources[k];
        sum += cur[j] / static_cast<double>(adj.out_degree(j));
      }
      next[i] = (1.0 - d) + d * sum;
      change = std::max(change, std::abs(next[i] - cur[i]));
    }
    return change;
  };

  PageRankResult result;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const double change = apply();
    result.iterations = it;
    if (change < options.tolerance) {
      result.converged = true;
      result.residual = change;
      result.scores = make_vector(g, "pagerank", std::move(cur));
      return result;
    }
    std::swap(cur, next);
  }
  result.residual = apply();
  result.converged = result.residual < options.tolerance;
  result.scores = make_vector(g, "pagerank", std::move(cur));
  return result;
}

std::vector<std::size_t> component_labels(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& e : g.edges()) {
    const std::size_t a = find(e.source), b = find(e.target);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> label(n), root_label(n, SIZE_MAX);
  std::size_t next = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t r = find(v);
    if (root_label[r] == SIZE_MAX) root_label[r] = next++;
    label[v] = root_label[r];
  }
  return label;
}

std::size_t component_count(const Graph& g) {
  const auto labels = component_labels(g);
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

double largest_component_fraction(const Graph& g) {
  if (g.node_count() == 0) throw InputError("largest component of an empty graph");
  const auto labels = component_labels(g);
  std::vector<std::size_t> sizes(g.node_count(), 0);
  for (auto l : labels) ++sizes[l];
  return static_cast<double>(*std::max_element(sizes.begin(), sizes.end())) / static_cast<double>(g.node_count());
}

}  // namespace metrics
void write_metric_tsv(std::ostream& out, const MetricVector& v) {
  out << "key\t" << v.metric << '\n';
  char buf[64];
  for (const auto& [key, value] : v.ranked()) {
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    out << key << '\t' << std::string_view(buf, res.ptr - buf) << '\n';
  }
}

std::map<std::string, double> read_metric_tsv(std::istream& in) {
  std::map<std::string, double> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    if (++n == 1 || line.empty()) continue;
    const auto c = text::split(line, '\t');
    double v = 0.0;
    if (c.size() != 2) throw ParseError("expected key and value", n);
    const auto [ptr, ec] = std::from_chars(c[1].data(), c[1].data() + c[1].size(), v);
    if (ec != std::errc() || ptr != c[1].data() + c[1].size()) throw ParseError("bad value", n);
    out[std::string(c[0])] = v;
  }
  return out;
}

}  // namespace venuenet
