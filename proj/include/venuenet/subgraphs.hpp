#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "venuenet/corpus.hpp"
#include "venuenet/graph.hpp"
#include "venuenet/parallel.hpp"

namespace venuenet {

enum class SubgraphKind { Coauthorship, Citation };
std::string_view to_string(SubgraphKind k);
SubgraphKind parse_subgraph_kind(std::string_view s);

/// Publication-level citation graph over the records of a corpus: sorted,
/// de-duplicated in-corpus targets per record, self-references dropped.
class CitationIndex {
 public:
  explicit CitationIndex(const Corpus& corpus);
  const std::vector<std::size_t>& cited_by(std::size_t record) const { return out_[record]; }

 private:
  std::vector<std::vector<std::size_t>> out_;
};

/// Authors of the venue's papers (keyed by normalized full name), linked when
/// they co-wrote a paper in this venue; weight = number of such papers.
/// Throws UnknownVenueError when no record or venue entry carries the key.
Graph extract_coauthorship_subgraph(const Corpus& corpus, std::string_view venue);

/// Induced citation graph on the set of in-corpus publications cited by the
/// venue's papers. Node keys are record ids.
Graph extract_citation_subgraph(const Corpus& corpus, const CitationIndex& index, std::string_view venue);
Graph extract_citation_subgraph(const Corpus& corpus, std::string_view venue);

struct SubgraphProfile {
  double m1_density = 0.0;
  double m2_avg_clustering = 0.0;
  double m3_max_betweenness = 0.0;  // normalized
  double m4_lcc_fraction = 0.0;
  std::size_t nodes = 0;
  std::size_t edges = 0;

  std::array<double, 4> metrics() const { return {m1_density, m2_avg_clustering, m3_max_betweenness, m4_lcc_fraction}; }
  bool operator==(const SubgraphProfile&) const = default;
};

/// M1 density (directed form for directed graphs), M2 average clustering on
/// the symmetrized graph, M3 maximum normalized hop-count betweenness, M4
/// weak largest-component fraction. Throws InputError for an empty graph.
SubgraphProfile subgraph_profile(const Graph& g, Execution execution = Execution::Parallel);

enum class Band : std::uint8_t { VeryLow, Low, Medium, High, VeryHigh };
std::string_view to_string(Band b);

/// Upper bounds of the first four bands; values >= `high` are VeryHigh.
struct BandCuts {
  double very_low = 0.05;
  double low = 0.25;
  double medium = 0.6;
  double high = 0.85;

  Band band(double value) const;
  bool operator==(const BandCuts&) const = default;
};

enum class NetworkType { Type1 = 1, Type2 = 2, Type3 = 3, Type4 = 4 };
std::string_view to_string(NetworkType t);
NetworkType parse_network_type(std::string_view s);

/// Set of admissible bands for one metric, as a bit mask over Band.
using BandSet = std::uint8_t;
constexpr BandSet bands(std::initializer_list<Band> list) {
  BandSet s = 0;
  for (Band b : list) s |= static_cast<BandSet>(1u << static_cast<unsigned>(b));
  return s;
}
inline constexpr BandSet kAnyBand = 0x1F;

struct TypeRule {
  NetworkType type;
  std::array<BandSet, 4> allowed;  // M1..M4
};

/// Ordered rule list; the first matching rule wins and `fallback` applies
/// when none matches.
struct ClassificationScheme {
  BandCuts cuts;
  std::vector<TypeRule> rules;
  NetworkType fallback = NetworkType::Type1;

  static ClassificationScheme standard();
};

NetworkType classify_network_type(const SubgraphProfile& p,
                                  const ClassificationScheme& scheme = ClassificationScheme::standard());

struct ProfileEntry {
  std::string venue;
  SubgraphKind subgraph = SubgraphKind::Coauthorship;
  VenueKind kind = VenueKind::Conference;
  SubgraphProfile profile;
  NetworkType type = NetworkType::Type1;
  std::optional<double> pagerank;
};

/// Extracts and profiles both subgraphs of every listed venue (in parallel
/// over venues). Venues whose subgraph is empty are skipped for that kind.
/// Output is sorted by (venue, subgraph).
std::vector<ProfileEntry> profile_venues(const Corpus& corpus, const std::vector<std::string>& venues,
                                         const std::map<std::string, double>& pagerank,
                                         const ClassificationScheme& scheme = ClassificationScheme::standard(),
                                         Execution execution = Execution::Parallel);

struct Histogram {
  SubgraphKind subgraph = SubgraphKind::Coauthorship;
  std::string group;   // "all", "journal" or "conference"
  std::string metric;  // "m1".."m4"
  std::vector<double> mass;  // bins over [0, 1], sums to 1
  std::size_t count = 0;
};

struct MedianPoint {
  SubgraphKind subgraph = SubgraphKind::Coauthorship;
  std::string metric;
  double pagerank = 0.0;  // score rounded to two decimals
  double median = 0.0;
  std::size_t count = 0;
};

struct StatReport {
  std::size_t bins = 20;
  std::vector<Histogram> histograms;
  std::vector<MedianPoint> medians;
};

/// Normalized histograms per metric (overall and split by venue kind) and
/// the median of every metric per rounded PageRank value. Entries without a
/// PageRank score are left out of the medians. Throws InputError for an
/// empty collection or zero bins.
StatReport profile_statistics(const std::vector<ProfileEntry>& profiles, std::size_t bins = 20);

void write_profiles_tsv(std::ostream& out, const std::vector<ProfileEntry>& profiles);
std::vector<ProfileEntry> read_profiles_tsv(std::istream& in);

/// Long-format rows: section, subgraph, group, metric, x_lo, x_hi, value, count.
void write_stats_tsv(std::ostream& out, const StatReport& report);

}  // namespace venuenet
