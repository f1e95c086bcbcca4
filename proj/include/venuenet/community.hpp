#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "venuenet/graph.hpp"
#include "venuenet/network.hpp"
#include "venuenet/parallel.hpp"

namespace venuenet {

/// Cluster id per node of the clustered graph. Cluster ids are dense,
/// numbered by the lexicographically smallest member key.
struct ClusterPartition {
  std::vector<std::string> nodes;
  std::vector<std::size_t> cluster;
  std::size_t cluster_count = 0;
  double q = 0.0;

  std::optional<std::size_t> cluster_of(std::string_view key) const;
  std::map<std::string, std::size_t> as_map() const;
  /// Members of each cluster, sorted.
  std::vector<std::vector<std::string>> members() const;
};

/// Sum over clusters of e_cc - a_c^2 with weights (or unit weights when
/// `weighted` is false). 0 for graphs without edges. `assignment` is indexed
/// by node; throws InputError if its size differs from the node count.
double modularity(const Graph& g, const std::vector<std::size_t>& assignment, bool weighted = true);
/// Keyed variant; throws InputError if a node has no cluster.
double modularity(const Graph& g, const std::map<std::string, std::size_t>& assignment, bool weighted = true);

struct GreedyOptions {
  bool weighted = true;
};

/// One agglomeration step: cluster `absorbed` (identified by its first
/// node index) joins `survivor`.
struct MergeStep {
  std::size_t survivor = 0;
  std::size_t absorbed = 0;
  double delta_q = 0.0;
  double q = 0.0;  // incrementally tracked modularity after the merge
};

struct GreedyResult {
  ClusterPartition partition;
  std::vector<MergeStep> merges;
  double initial_q = 0.0;
};

/// Clauset-Newman-Moore agglomeration from singletons: repeatedly merge the
/// connected cluster pair with the largest modularity gain, ties going to the
/// lexicographically smallest pair of cluster representatives (smallest member
/// keys), until no merge has a positive gain.
GreedyResult greedy_modularity_partition(const Graph& g, const GreedyOptions& options = {});

enum class UnclusteredReason { Thresholded, ZeroCosine };
std::string_view to_string(UnclusteredReason r);

struct UnclusteredVenue {
  std::string venue;
  UnclusteredReason reason = UnclusteredReason::Thresholded;
  std::optional<std::size_t> cluster;  // empty when no cluster has positive cosine
  double cosine = 0.0;
};

struct ClusterProjection {
  /// V': aggregated rows for clusters ("C<id>") and un-clustered venues.
  CouplingMatrix cluster_matrix;
  std::vector<UnclusteredVenue> unclustered;  // sorted by venue
  /// Final membership: clustered venues plus the assigned un-clustered ones.
  std::map<std::string, std::size_t> assignment;
  /// Undirected cosine graph over final cluster aggregates; node keys "C<id>".
  Graph cluster_graph{false};
};

std::string cluster_key(std::size_t id);

/// Aggregates coupling counts per cluster, assigns every matrix venue absent
/// from the partition to the cluster with the highest cosine against the
/// cluster's aggregate (ties to the smallest id; zero cosine stays
/// unassigned), then builds the cluster-level cosine network from the
/// aggregates including the assigned venues.
ClusterProjection project_to_cluster_network(const CouplingMatrix& m, const ClusterPartition& p,
                                             Execution execution = Execution::Parallel);

/// Domain label counts per cluster from a venue -> domain table.
std::vector<std::map<std::string, std::size_t>> domain_composition(
    const std::map<std::string, std::size_t>& assignment, std::size_t cluster_count,
    const std::map<std::string, std::string>& domains);

/// "venue_key<TAB>cluster_id" rows with a header, sorted by venue key.
void write_partition_tsv(std::ostream& out, const ClusterPartition& p);
/// Reads a partition file; q and the node order follow the file.
ClusterPartition read_partition_tsv(std::istream& in);

}  // namespace venuenet
