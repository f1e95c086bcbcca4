#pragma once

// Slow, obviously-correct reference computations used to check the library.

#include <cstddef>
#include <string_view>
#include <vector>

#include "venuenet/graph.hpp"
#include "venuenet/linkage.hpp"

namespace oracle {

// Full (|a|+1) x (|b|+1) local alignment table; returns the best cell.
int smith_waterman(std::string_view a, std::string_view b, const venuenet::AlignmentScoring& s = {});

// Floyd-Warshall distances, then every shortest s-t path is enumerated
// explicitly and each interior node on it is credited 1 / (#paths).
std::vector<double> betweenness(const venuenet::Graph& g, bool weighted, bool normalized);

double density(const venuenet::Graph& g);
// Neighbour-pair enumeration on the underlying undirected simple graph.
std::vector<double> local_clustering(const venuenet::Graph& g);
double average_clustering(const venuenet::Graph& g);
double largest_component_fraction(const venuenet::Graph& g);

// Q = 1/2m sum_ij (A_ij - k_i k_j / 2m) [c_i == c_j] over the dense matrix.
double modularity(const venuenet::Graph& g, const std::vector<std::size_t>& cluster, bool weighted = true);

struct BestPartition {
  std::vector<std::size_t> cluster;
  double q = 0.0;
};
// Every set partition of the nodes (restricted growth strings); n <= 10.
BestPartition best_partition(const venuenet::Graph& g, bool weighted = true);

// max_i |T(p)_i - p_i| with T the unnormalized PageRank map.
double pagerank_residual(const venuenet::Graph& g, const std::vector<double>& p, double d);

}  // namespace oracle
