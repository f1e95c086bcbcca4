#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "venuenet/corpus.hpp"
#include "venuenet/graph.hpp"
#include "venuenet/linkage.hpp"
#include "venuenet/parallel.hpp"

namespace venuenet {

/// Sparse reference-count vector: (cited key index, count) sorted by index,
/// counts strictly positive.
using CouplingVector = std::vector<std::pair<std::uint32_t, std::uint64_t>>;

/// Per-venue bibliographic coupling vectors B_i over a shared universe of
/// cited-publication keys.
struct CouplingMatrix {
  std::vector<std::string> venues;  // sorted
  std::vector<std::uint64_t> publication_counts;
  std::vector<std::string> keys;    // cited-publication keys, sorted
  std::vector<CouplingVector> vectors;

  std::size_t universe_size() const { return keys.size(); }
  std::optional<std::size_t> venue_index(std::string_view venue) const;
  /// Throws UnknownVenueError.
  const CouplingVector& vector_of(std::string_view venue) const;
  std::uint64_t count(std::string_view venue, std::string_view key) const;

  bool operator==(const CouplingMatrix&) const = default;

  /// Builds a matrix from per-row (key, count) lists; rows with no counts
  /// are dropped. Keys are re-interned so the result is canonical.
  static CouplingMatrix from_rows(
      const std::vector<std::tuple<std::string, std::uint64_t, std::vector<std::pair<std::string, std::uint64_t>>>>& rows);
};

/// Key of a cited publication in the coupling universe: "id:<record id>" for
/// record references, "raw:<normalized citation>" for unresolved strings.
std::string cited_key(const ReferenceEntry& ref);

/// Aggregates every reference entry of every venue-assigned record,
/// including references that leave the corpus. Venues whose vectors are
/// empty are left out.
CouplingMatrix build_coupling_matrix(const Corpus& corpus);

/// sum_k a_k b_k / (|a| |b|); 0 when either vector is empty.
double cosine(const CouplingVector& a, const CouplingVector& b);
/// Throws UnknownVenueError.
double cosine_similarity(const CouplingMatrix& m, std::string_view venue_a, std::string_view venue_b);

/// Undirected venue graph with one node per matrix venue and an edge of
/// weight cosine(i, j) for every pair with non-zero similarity.
Graph build_knowledge_network(const CouplingMatrix& m, Execution execution = Execution::Parallel);

/// Directed venue graph; edge weight = number of references from papers of
/// V_i to papers of V_j. A reference naming the right id of a match is
/// resolved to its left record. Within-venue citations are stored in the
/// node's self_citations instead of as edges.
Graph build_citation_network(const Corpus& corpus, const std::vector<MatchPair>* matches = nullptr);

enum class ThresholdRule { CosineMin, CitationMinExclusive };

struct Threshold {
  ThresholdRule rule = ThresholdRule::CosineMin;
  double value = 0.1;

  static Threshold cosine_min(double v = 0.1) { return {ThresholdRule::CosineMin, v}; }
  static Threshold citation_min_exclusive(double v = 50.0) { return {ThresholdRule::CitationMinExclusive, v}; }
};

/// Keeps edges with weight >= value (cosine rule, undirected graphs) or
/// weight > value (citation rule, directed graphs), then drops nodes left
/// without edges. Weights are not altered. Throws InputError when the rule
/// does not match the graph's directedness.
Graph apply_threshold(const Graph& g, const Threshold& threshold);

struct NetworkSummary {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t components = 0;
  double density = 0.0;
  double clustering = 0.0;
  bool operator==(const NetworkSummary&) const = default;
};

NetworkSummary summarize(const Graph& g);

/// Aligned text table, one column per named network.
void write_summary_table(std::ostream& out, const std::vector<std::pair<std::string, NetworkSummary>>& columns);

/// Coupling matrix as TSV: "#venue" lines with publication counts followed by
/// venue / cited_key / count rows.
void write_coupling_tsv(std::ostream& out, const CouplingMatrix& m);
CouplingMatrix read_coupling_tsv(std::istream& in);

}  // namespace venuenet
