#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace venuenet {

struct Node {
  std::string key;
  std::uint64_t publication_count = 0;
  std::uint64_t self_citations = 0;              // within-venue citations (citation networks)
  std::map<std::string, std::string> attributes;  // e.g. cluster, domain
  bool operator==(const Node&) const = default;
};

struct Edge {
  std::size_t source = 0;
  std::size_t target = 0;
  double weight = 0.0;
  bool operator==(const Edge&) const = default;
};

/// Weighted simple graph keyed by string node ids. Undirected edges are
/// stored once with source < target; self-loops and non-positive weights are
/// rejected. Node order is insertion order; edges are kept sorted by
/// (source, target).
class Graph {
 public:
  explicit Graph(bool directed = false) : directed_(directed) {}

  bool directed() const { return directed_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  /// Returns the index of `key`, inserting the node if it is new.
  std::size_t add_node(std::string_view key, std::uint64_t publication_count = 0);
  /// Throws InputError for self-loops, non-positive or non-finite weights and
  /// duplicate edges.
  void add_edge(std::size_t source, std::size_t target, double weight);
  void add_edge(std::string_view source, std::string_view target, double weight);

  std::optional<std::size_t> find(std::string_view key) const;
  /// Throws UnknownVenueError.
  std::size_t index_of(std::string_view key) const;

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(std::size_t i) const { return nodes_[i]; }
  Node& node(std::size_t i) { return nodes_[i]; }
  const std::vector<Edge>& edges() const;

  double total_weight() const;

  /// Subgraph on the nodes with keep[i] true, in the same relative order.
  Graph induced(const std::vector<bool>& keep) const;
  /// Undirected copy of a directed graph; antiparallel weights are summed.
  Graph symmetrized() const;

  /// Order-independent content hash (nodes, edges, weights, attributes).
  std::uint64_t fingerprint() const;

  bool operator==(const Graph& other) const;

 private:
  static std::uint64_t edge_key(std::size_t s, std::size_t t) {
    return (static_cast<std::uint64_t>(s) << 32) | static_cast<std::uint64_t>(t);
  }

  bool directed_;
  std::vector<Node> nodes_;
  std::unordered_map<std::string, std::size_t> index_;
  mutable std::vector<Edge> edges_;
  mutable bool sorted_ = true;
  mutable std::unordered_map<std::uint64_t, std::size_t> edge_index_;  // position in edges_
};

using VenueGraph = Graph;

/// Compressed adjacency for metric kernels. For undirected graphs `out` and
/// `in` both hold the full neighbourhood.
struct Adjacency {
  std::size_t n = 0;
  std::vector<std::size_t> out_offsets, in_offsets;
  std::vector<std::size_t> out_targets, in_sources;
  std::vector<double> out_weights, in_weights;

  std::size_t out_degree(std::size_t v) const { return out_offsets[v + 1] - out_offsets[v]; }
  std::size_t in_degree(std::size_t v) const { return in_offsets[v + 1] - in_offsets[v]; }

  static Adjacency of(const Graph& g);
};

}  // namespace venuenet
