#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "venuenet/graph.hpp"
#include "venuenet/parallel.hpp"

namespace venuenet {

/// Per-node metric values, aligned with the node order of the graph they
/// were computed on.
struct MetricVector {
  std::string metric;
  std::vector<std::string> keys;
  std::vector<double> values;
  std::uint64_t graph_fingerprint = 0;

  double max() const;
  /// (key, value) pairs sorted by value descending, then key ascending.
  std::vector<std::pair<std::string, double>> ranked() const;
};

namespace metrics {

/// 2|E| / (|V|(|V|-1)) undirected, |E| / (|V|(|V|-1)) directed; 0 for |V| <= 1.
double density(const Graph& g);

/// Closed triads over centred triples per node on the symmetrized simple
/// graph; 0 for nodes of degree < 2.
std::vector<double> local_clustering(const Graph& g);
/// Mean of local_clustering over all nodes; 0 for the empty graph.
double average_clustering_coefficient(const Graph& g);

struct BetweennessOptions {
  /// Shortest paths over distance 1/weight instead of hop count.
  bool weighted = false;
  /// Divide by (n-1)(n-2) directed or (n-1)(n-2)/2 undirected.
  bool normalized = false;
  Execution execution = Execution::Parallel;
};

/// Brandes' dependency accumulation. Endpoints are excluded; undirected
/// values count each unordered pair once. Unreachable pairs contribute 0.
MetricVector betweenness_centrality(const Graph& g, const BetweennessOptions& options = {});

struct PageRankOptions {
  double damping = 0.85;
  double tolerance = 1e-8;
  int max_iterations = 200;
  Execution execution = Execution::Parallel;
};

struct PageRankResult {
  MetricVector scores;
  bool converged = false;
  int iterations = 0;
  /// max_i |T(P)_i - P_i| of the returned scores P.
  double residual = 0.0;
};

/// Unnormalized PageRank P(i) = (1-d) + d * sum_{j -> i} P(j) / outdeg(j),
/// Jacobi iteration from all-ones. Dangling nodes pass nothing on.
/// Undirected graphs are treated as symmetric digraphs. Throws InputError
/// for d outside (0,1), tol <= 0 or max_iterations <= 0.
PageRankResult pagerank(const Graph& g, const PageRankOptions& options = {});

/// Weak component label per node, labels numbered in order of first node.
std::vector<std::size_t> component_labels(const Graph& g);
std::size_t component_count(const Graph& g);

/// Fraction of nodes in the largest (weakly) connected component. Throws
/// InputError on the empty graph.
double largest_component_fraction(const Graph& g);

}  // namespace metrics

/// "key<TAB><metric>" header, then one row per node ranked by value.
void write_metric_tsv(std::ostream& out, const MetricVector& v);
/// Reads a ranked metric file back into a key -> value table.
std::map<std::string, double> read_metric_tsv(std::istream& in);

}  // namespace venuenet
