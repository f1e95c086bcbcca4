#include "venuenet/subgraphs.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "venuenet/error.hpp"
#include "venuenet/metrics.hpp"
#include "venuenet/text.hpp"

namespace venuenet {

std::string_view to_string(SubgraphKind k) { return k == SubgraphKind::Coauthorship ? "coauthorship" : "citation"; }

SubgraphKind parse_subgraph_kind(std::string_view s) {
  if (s == "coauthorship") return SubgraphKind::Coauthorship;
  if (s == "citation") return SubgraphKind::Citation;
  throw InputError("unknown subgraph kind \"" + std::string(s) + "\"");
}

CitationIndex::CitationIndex(const Corpus& corpus) : out_(corpus.size()) {
  const auto& records = corpus.records();
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& targets = out_[i];
    for (const auto& ref : records[i].references) {
      if (!ref.resolved) continue;
      if (const auto j = corpus.index_of(ref.target); j && *j != i) targets.push_back(*j);
    }
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  }
}

namespace {

void require_venue(const Corpus& corpus, std::string_view venue) {
  if (corpus.venue(venue)) return;
  for (const auto& r : corpus.records()) {
    if (r.venue_key && *r.venue_key == venue) return;
  }
  throw UnknownVenueError(std::string(venue));
}

}  // namespace

Graph extract_coauthorship_subgraph(const Corpus& corpus, std::string_view venue) {
  require_venue(corpus, venue);
  Graph g(false);
  std::map<std::pair<std::size_t, std::size_t>, double> weight;
  for (const auto& r : corpus.records()) {
    if (!r.venue_key || *r.venue_key != venue) continue;
    std::vector<std::size_t> ids;
    for (const auto& a : r.authors) ids.push_back(g.add_node(text::normalize(a.full_name)));
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (std::size_t id : ids) ++g.node(id).publication_count;
    for (std::size_t x = 0; x < ids.size(); ++x) {
      for (std::size_t y = x + 1; y < ids.size(); ++y) weight[{ids[x], ids[y]}] += 1.0;
    }
  }
  for (const auto& [st, w] : weight) g.add_edge(st.first, st.second, w);
  return g;
}

Graph extract_citation_subgraph(const Corpus& corpus, const CitationIndex& index, std::string_view venue) {
  require_venue(corpus, venue);
  std::set<std::size_t> cited;
  const auto& records = corpus.records();
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].venue_key && *records[i].venue_key == venue) {
      cited.insert(index.cited_by(i).begin(), index.cited_by(i).end());
    }
  }
  Graph g(true);
  std::map<std::size_t, std::size_t> local;
  for (std::size_t p : cited) local[p] = g.add_node(records[p].id);
  for (std::size_t p : cited) {
    for (std::size_t q : index.cited_by(p)) {
      if (const auto it = local.find(q); it != local.end()) g.add_edge(local[p], it->second, 1.0);
    }
  }
  return g;
}

Graph extract_citation_subgraph(const Corpus& corpus, std::string_view venue) {
  return extract_citation_subgraph(corpus, CitationIndex(corpus), venue);
}

SubgraphProfile subgraph_profile(const Graph& g, Execution execution) {
  if (g.node_count() == 0) throw InputError("cannot profile an empty subgraph");
  SubgraphProfile p;
  p.nodes = g.node_count();
  p.edges = g.edge_count();
  p.m1_density = metrics::density(g);
  p.m2_avg_clustering = metrics::average_clustering_coefficient(g);
  p.m3_max_betweenness = metrics::betweenness_centrality(g, {.weighted = false, .normalized = true, .execution = execution}).max();
  p.m4_lcc_fraction = metrics::largest_component_fraction(g);
  return p;
}

std::string_view to_string(Band b) {
  switch (b) {
    case Band::VeryLow: return "very-low";
    case Band::Low: return "low";
    case Band::Medium: return "medium";
    case Band::High: return "high";
    case Band::VeryHigh: return "very-high";
  }
  return "";
}

Band BandCuts::band(double value) const {
  if (value < very_low) return Band::VeryLow;
  if (value < low) return Band::Low;
  if (value < medium) return Band::Medium;
  if (value < high) return Band::High;
  return Band::VeryHigh;
}

std::string_view to_string(NetworkType t) {
  switch (t) {
    case NetworkType::Type1: return "Type1";
    case NetworkType::Type2: return "Type2";
    case NetworkType::Type3: return "Type3";
    case NetworkType::Type4: return "Type4";
  }
  return "";
}

NetworkType parse_network_type(std::string_view s) {
  if (s == "Type1") return NetworkType::Type1;
  if (s == "Type2") return NetworkType::Type2;
  if (s == "Type3") return NetworkType::Type3;
  if (s == "Type4") return NetworkType::Type4;
  throw InputError("unknown network type \"" + std::string(s) + "\"");
}

ClassificationScheme ClassificationScheme::standard() {
  using enum Band;
  ClassificationScheme s;
  // Precedence Type 4, 3, 2; Type 1 (all very low) is the fallback. Density is
  // left free for Type 4: a single node carrying nearly all shortest paths
  // forces a sparse, hub-dominated graph.
  s.rules = {
      {NetworkType::Type4, {kAnyBand, bands({Medium}), bands({VeryHigh}), bands({VeryHigh})}},
      {NetworkType::Type3, {bands({Low, Medium}), bands({Medium}), bands({Low, Medium}), bands({High})}},
      {NetworkType::Type2, {bands({Low, Medium}), bands({High}), bands({VeryLow, Low}), bands({Medium})}},
      {NetworkType::Type1, {bands({VeryLow}), bands({VeryLow}), bands({VeryLow}), bands({VeryLow})}},
  };
  return s;
}

NetworkType classify_network_type(const SubgraphProfile& p, const ClassificationScheme& scheme) {
  const auto values = p.metrics();
  for (const auto& rule : scheme.rules) {
    bool match = true;
    for (std::size_t m = 0; m < 4 && match; ++m) {
      const auto bit = static_cast<BandSet>(1u << static_cast<unsigned>(scheme.cuts.band(values[m])));
      match = (rule.allowed[m] & bit) != 0;
    }
    if (match) return rule.type;
  }
  return scheme.fallback;
}

std::vector<ProfileEntry> profile_venues(const Corpus& corpus, const std::vector<std::string>& venues,
                                         const std::map<std::string, double>& pagerank,
                                         const ClassificationScheme& scheme, Execution execution) {
  const CitationIndex index(corpus);
  std::vector<std::array<std::optional<ProfileEntry>, 2>> slots(venues.size());
  const auto n = static_cast<std::int64_t>(venues.size());
#pragma omp parallel for schedule(dynamic, 1) if (execution == Execution::Parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    const std::string& venue = venues[i];
    const VenueInfo* info = corpus.venue(venue);
    std::optional<double> pr;
    if (const auto it = pagerank.find(venue); it != pagerank.end()) pr = it->second;
    const Graph graphs[2] = {extract_coauthorship_subgraph(corpus, venue),
                             extract_citation_subgraph(corpus, index, venue)};
    for (int k = 0; k < 2; ++k) {
      if (graphs[k].node_count() == 0) continue;
      ProfileEntry e;
      e.venue = venue;
      e.subgraph = k == 0 ? SubgraphKind::Coauthorship : SubgraphKind::Citation;
      e.kind = info ? info->kind : VenueKind::Conference;
      e.profile = subgraph_profile(graphs[k], Execution::Serial);
      e.type = classify_network_type(e.profile, scheme);
      e.pagerank = pr;
      slots[i][k] = std::move(e);
    }
  }
  std::vector<ProfileEntry> out;
  for (auto& pair : slots) {
    for (auto& e : pair) {
      if (e) out.push_back(std::move(*e));
    }
  }
  std::sort(out.begin(), out.end(), [](const ProfileEntry& a, const ProfileEntry& b) {
    return a.venue != b.venue ? a.venue < b.venue : a.subgraph < b.subgraph;
  });
  return out;
}

namespace {

constexpr std::array<const char*, 4> kMetricNames{"m1", "m2", "m3", "m4"};

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : (v[mid - 1] + v[mid]) / 2.0;
}

}  // namespace

StatReport profile_statistics(const std::vector<ProfileEntry>& profiles, std::size_t bins) {
  if (profiles.empty()) throw InputError("no profiles to summarize");
  if (bins == 0) throw InputError("histogram needs at least one bin");
  StatReport report;
  report.bins = bins;
  for (const SubgraphKind sk : {SubgraphKind::Coauthorship, SubgraphKind::Citation}) {
    for (const char* group : {"all", "journal", "conference"}) {
      const std::string_view g = group;
      std::vector<const ProfileEntry*> members;
      for (const auto& p : profiles) {
        if (p.subgraph != sk) continue;
        if (g != "all" && to_string(p.kind) != g) continue;
        members.push_back(&p);
      }
      if (members.empty()) continue;
      for (std::size_t m = 0; m < 4; ++m) {
        Histogram h;
        h.subgraph = sk;
        h.group = group;
        h.metric = kMetricNames[m];
        h.count = members.size();
        std::vector<std::size_t> counts(bins, 0);
        for (const ProfileEntry* p : members) {
          const double x = std::clamp(p->profile.metrics()[m], 0.0, 1.0);
          const auto b = std::min(bins - 1, static_cast<std::size_t>(std::floor(x * static_cast<double>(bins))));
          ++counts[b];
        }
        for (std::size_t c : counts) h.mass.push_back(static_cast<double>(c) / static_cast<double>(members.size()));
        report.histograms.push_back(std::move(h));
      }
    }
    std::map<double, std::vector<const ProfileEntry*>> by_rank;
    for (const auto& p : profiles) {
      if (p.subgraph == sk && p.pagerank) by_rank[std::round(*p.pagerank * 100.0) / 100.0].push_back(&p);
    }
    for (std::size_t m = 0; m < 4; ++m) {
      for (const auto& [rank, members] : by_rank) {
        std::vector<double> values;
        for (const ProfileEntry* p : members) values.push_back(p->profile.metrics()[m]);
        report.medians.push_back({sk, kMetricNames[m], rank, median_of(values), values.size()});
      }
    }
  }
  return report;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("bad number \"" + std::string(s) + "\"", line);
  return v;
}

std::size_t parse_size(std::string_view s, std::size_t line) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("bad count \"" + std::string(s) + "\"", line);
  return v;
}

constexpr std::string_view kProfileHeader = "venue\tsubgraph\tkind\tnodes\tedges\tm1\tm2\tm3\tm4\ttype\tpagerank";

}  // namespace

void write_profiles_tsv(std::ostream& out, const std::vector<ProfileEntry>& profiles) {
  out << kProfileHeader << '\n';
  for (const auto& p : profiles) {
    out << p.venue << '\t' << to_string(p.subgraph) << '\t' << to_string(p.kind) << '\t' << p.profile.nodes << '\t'
        << p.profile.edges << '\t' << fmt(p.profile.m1_density) << '\t' << fmt(p.profile.m2_avg_clustering) << '\t'
        << fmt(p.profile.m3_max_betweenness) << '\t' << fmt(p.profile.m4_lcc_fraction) << '\t' << to_string(p.type)
        << '\t' << (p.pagerank ? fmt(*p.pagerank) : std::string("NA")) << '\n';
  }
}

std::vector<ProfileEntry> read_profiles_tsv(std::istream& in) {
  std::vector<ProfileEntry> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line == kProfileHeader) continue;
    const auto c = text::split(line, '\t');
    if (c.size() != 11) throw ParseError("expected 11 tab-separated columns", n);
    ProfileEntry e;
    e.venue = std::string(c[0]);
    try {
      e.subgraph = parse_subgraph_kind(c[1]);
      e.kind = parse_venue_kind(c[2]);
      e.type = parse_network_type(c[9]);
    } catch (const InputError& err) {
      throw ParseError(err.what(), n);
    }
    e.profile.nodes = parse_size(c[3], n);
    e.profile.edges = parse_size(c[4], n);
    e.profile.m1_density = parse_double(c[5], n);
    e.profile.m2_avg_clustering = parse_double(c[6], n);
    e.profile.m3_max_betweenness = parse_double(c[7], n);
    e.profile.m4_lcc_fraction = parse_double(c[8], n);
    if (c[10] != "NA") e.pagerank = parse_double(c[10], n);
    out.push_back(std::move(e));
  }
  return out;
}

void write_stats_tsv(std::ostream& out, const StatReport& report) {
  out << "section\tsubgraph\tgroup\tmetric\tx_lo\tx_hi\tvalue\tcount\n";
  const double width = 1.0 / static_cast<double>(report.bins);
  for (const auto& h : report.histograms) {
    for (std::size_t b = 0; b < h.mass.size(); ++b) {
      out << "histogram\t" << to_string(h.subgraph) << '\t' << h.group << '\t' << h.metric << '\t'
          << fmt(static_cast<double>(b) * width) << '\t' << fmt(static_cast<double>(b + 1) * width) << '\t'
          << fmt(h.mass[b]) << '\t' << h.count << '\n';
    }
  }
  for (const auto& m : report.medians) {
    out << "pagerank_median\t" << to_string(m.subgraph) << "\tall\t" << m.metric << '\t' << fmt(m.pagerank) << '\t'
        << fmt(m.pagerank) << '\t' << fmt(m.median) << '\t' << m.count << '\n';
  }
}

}  // namespace venuenet
