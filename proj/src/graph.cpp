#include "venuenet/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <tuple>

#include "venuenet/error.hpp"

namespace venuenet {

std::size_t Graph::add_node(std::string_view key, std::uint64_t publication_count) {
  const auto [it, inserted] = index_.emplace(std::string(key), nodes_.size());
  if (inserted) nodes_.push_back(Node{std::string(key), publication_count, 0, {}});
  return it->second;
}

void Graph::add_edge(std::size_t source, std::size_t target, double weight) {
  if (source >= nodes_.size() || target >= nodes_.size()) throw InputError("edge endpoint out of range");
  if (source == target) throw InputError("self-loop on \"" + nodes_[source].key + "\"");
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw InputError("edge " + nodes_[source].key + " -> " + nodes_[target].key + " has non-positive weight");
  }
  if (!directed_ && source > target) std::swap(source, target);
  if (!edge_index_.emplace(edge_key(source, target), edges_.size()).second) {
    throw InputError("duplicate edge " + nodes_[source].key + " -> " + nodes_[target].key);
  }
  if (!edges_.empty()) {
    const Edge& last = edges_.back();
    if (last.source > source || (last.source == source && last.target > target)) sorted_ = false;
  }
  edges_.push_back({source, target, weight});
}

void Graph::add_edge(std::string_view source, std::string_view target, double weight) {
  add_edge(index_of(source), index_of(target), weight);
}

std::optional<std::size_t> Graph::find(std::string_view key) const {
  const auto it = index_.find(std::string(key));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Graph::index_of(std::string_view key) const {
  const auto i = find(key);
  if (!i) throw UnknownVenueError(std::string(key));
  return *i;
}

const std::vector<Edge>& Graph::edges() const {
  if (!sorted_) {
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
      return a.source != b.source ? a.source < b.source : a.target < b.target;
    });
    for (std::size_t i = 0; i < edges_.size(); ++i) edge_index_[edge_key(edges_[i].source, edges_[i].target)] = i;
    sorted_ = true;
  }
  return edges_;
}

double Graph::total_weight() const {
  double sum = 0.0;
  for (const auto& e : edges()) sum += e.weight;
  return sum;
}

Graph Graph::induced(const std::vector<bool>& keep) const {
  Graph g(directed_);
  std::vector<std::size_t> remap(nodes_.size(), SIZE_MAX);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!keep[i]) continue;
    remap[i] = g.add_node(nodes_[i].key, nodes_[i].publication_count);
    g.nodes_[remap[i]] = nodes_[i];
  }
  for (const auto& e : edges()) {
    if (remap[e.source] != SIZE_MAX && remap[e.target] != SIZE_MAX) g.add_edge(remap[e.source], remap[e.target], e.weight);
  }
  return g;
}

Graph Graph::symmetrized() const {
  if (!directed_) return *this;
  Graph g(false);
  g.nodes_ = nodes_;
  g.index_ = index_;
  std::map<std::pair<std::size_t, std::size_t>, double> w;
  for (const auto& e : edges()) w[{std::min(e.source, e.target), std::max(e.source, e.target)}] += e.weight;
  for (const auto& [st, weight] : w) g.add_edge(st.first, st.second, weight);
  return g;
}

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

void mix(std::uint64_t& h, std::string_view s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  h ^= 0xFF;
  h *= kFnvPrime;
}

void mix(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xFF;
    h *= kFnvPrime;
  }
}

}  // namespace

std::uint64_t Graph::fingerprint() const {
  std::uint64_t h = kFnvOffset;
  mix(h, static_cast<std::uint64_t>(directed_));
  std::vector<std::size_t> order(nodes_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return nodes_[a].key < nodes_[b].key; });
  for (auto i : order) {
    const Node& n = nodes_[i];
    mix(h, n.key);
    mix(h, n.publication_count);
    mix(h, n.self_citations);
    for (const auto& [k, v] : n.attributes) {
      mix(h, k);
      mix(h, v);
    }
  }
  std::vector<std::tuple<std::string_view, std::string_view, double>> es;
  for (const auto& e : edges()) {
    std::string_view s = nodes_[e.source].key, t = nodes_[e.target].key;
    if (!directed_ && t < s) std::swap(s, t);
    es.emplace_back(s, t, e.weight);
  }
  std::sort(es.begin(), es.end());
  for (const auto& [s, t, w] : es) {
    mix(h, s);
    mix(h, t);
    mix(h, std::bit_cast<std::uint64_t>(w));
  }
  return h;
}

bool Graph::operator==(const Graph& other) const {
  if (directed_ != other.directed_ || nodes_.size() != other.nodes_.size() ||
      edges_.size() != other.edges_.size()) {
    return false;
  }
  for (const auto& n : nodes_) {
    const auto j = other.find(n.key);
    if (!j || !(other.nodes_[*j] == n)) return false;
  }
  other.edges();  // settles other's edge order and index
  for (const auto& e : edges()) {
    const std::size_t s = *other.find(nodes_[e.source].key);
    const std::size_t t = *other.find(nodes_[e.target].key);
    const auto it = other.edge_index_.find(directed_ ? edge_key(s, t) : edge_key(std::min(s, t), std::max(s, t)));
    if (it == other.edge_index_.end()) return false;
    const Edge& oe = other.edges_[it->second];
    if (oe.weight != e.weight) return false;
  }
  return true;
}

Adjacency Adjacency::of(const Graph& g) {
  Adjacency a;
  a.n = g.node_count();
  const auto& edges = g.edges();
  std::vector<std::size_t> out_deg(a.n, 0), in_deg(a.n, 0);
  for (const auto& e : edges) {
    ++out_deg[e.source];
    ++in_deg[e.target];
    if (!g.directed()) {
      ++out_deg[e.target];
      ++in_deg[e.source];
    }
  }
  a.out_offsets.assign(a.n + 1, 0);
  a.in_offsets.assign(a.n + 1, 0);
  for (std::size_t v = 0; v < a.n; ++v) {
    a.out_offsets[v + 1] = a.out_offsets[v] + out_deg[v];
    a.in_offsets[v + 1] = a.in_offsets[v] + in_deg[v];
  }
  a.out_targets.resize(a.out_offsets[a.n]);
  a.out_weights.resize(a.out_offsets[a.n]);
  a.in_sources.resize(a.in_offsets[a.n]);
  a.in_weights.resize(a.in_offsets[a.n]);
  std::vector<std::size_t> out_pos(a.out_offsets.begin(), a.out_offsets.end() - 1);
  std::vector<std::size_t> in_pos(a.in_offsets.begin(), a.in_offsets.end() - 1);
  auto put = [&](std::size_t s, std::size_t t, double w) {
    a.out_targets[out_pos[s]] = t;
    a.out_weights[out_pos[s]++] = w;
    a.in_sources[in_pos[t]] = s;
    a.in_weights[in_pos[t]++] = w;
  };
  for (const auto& e : edges) {
    put(e.source, e.target, e.weight);
    if (!g.directed()) put(e.target, e.source, e.weight);
  }
  return a;
}

}  // namespace venuenet
