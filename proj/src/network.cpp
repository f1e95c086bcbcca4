#include "venuenet/network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <unordered_map>

#include "venuenet/error.hpp"
#include "venuenet/metrics.hpp"
#include "venuenet/text.hpp"

namespace venuenet {

std::optional<std::size_t> CouplingMatrix::venue_index(std::string_view venue) const {
  const auto it = std::lower_bound(venues.begin(), venues.end(), venue);
  if (it == venues.end() || *it != venue) return std::nullopt;
  return static_cast<std::size_t>(it - venues.begin());
}

const CouplingVector& CouplingMatrix::vector_of(std::string_view venue) const {
  const auto i = venue_index(venue);
  if (!i) throw UnknownVenueError(std::string(venue));
  return vectors[*i];
}

std::uint64_t CouplingMatrix::count(std::string_view venue, std::string_view key) const {
  const auto& v = vector_of(venue);
  const auto k = std::lower_bound(keys.begin(), keys.end(), key);
  if (k == keys.end() || *k != key) return 0;
  const auto idx = static_cast<std::uint32_t>(k - keys.begin());
  const auto it = std::lower_bound(v.begin(), v.end(), std::pair<std::uint32_t, std::uint64_t>{idx, 0});
  return it != v.end() && it->first == idx ? it->second : 0;
}

CouplingMatrix CouplingMatrix::from_rows(
    const std::vector<std::tuple<std::string, std::uint64_t, std::vector<std::pair<std::string, std::uint64_t>>>>& rows) {
  std::map<std::string, std::pair<std::uint64_t, std::map<std::string, std::uint64_t>>> sorted;
  std::vector<std::string> keys;
  for (const auto& [venue, pubs, counts] : rows) {
    auto& row = sorted[venue];
    row.first = pubs;
    for (const auto& [key, c] : counts) {
      if (c == 0) continue;
      row.second[key] += c;
      keys.push_back(key);
    }
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  CouplingMatrix m;
  m.keys = std::move(keys);
  for (auto& [venue, row] : sorted) {
    if (row.second.empty()) continue;
    CouplingVector v;
    for (const auto& [key, c] : row.second) {
      const auto idx = std::lower_bound(m.keys.begin(), m.keys.end(), key) - m.keys.begin();
      v.emplace_back(static_cast<std::uint32_t>(idx), c);
    }
    m.venues.push_back(venue);
    m.publication_counts.push_back(row.first);
    m.vectors.push_back(std::move(v));
  }
  return m;
}

std::string cited_key(const ReferenceEntry& ref) {
  return ref.resolved ? "id:" + ref.target : "raw:" + text::normalize(ref.target);
}

CouplingMatrix build_coupling_matrix(const Corpus& corpus) {
  std::map<std::string, std::pair<std::uint64_t, std::vector<std::pair<std::string, std::uint64_t>>>> by_venue;
  for (const auto& r : corpus.records()) {
    if (!r.venue_key) continue;
    auto& row = by_venue[*r.venue_key];
    ++row.first;
    for (const auto& ref : r.references) row.second.emplace_back(cited_key(ref), 1);
  }
  std::vector<std::tuple<std::string, std::uint64_t, std::vector<std::pair<std::string, std::uint64_t>>>> rows;
  for (auto& [venue, row] : by_venue) rows.emplace_back(venue, row.first, std::move(row.second));
  return CouplingMatrix::from_rows(rows);
}

namespace {

std::uint64_t squared_norm(const CouplingVector& v) {
  std::uint64_t s = 0;
  for (const auto& [k, c] : v) s += c * c;
  return s;
}

// sqrt of the product keeps identical vectors at exactly 1.0.
double cosine_from(std::uint64_t dot, std::uint64_t sq_a, std::uint64_t sq_b) {
  if (dot == 0) return 0.0;
  return static_cast<double>(dot) / std::sqrt(static_cast<double>(sq_a) * static_cast<double>(sq_b));
}

std::uint64_t dot(const CouplingVector& a, const CouplingVector& b) {
  std::uint64_t s = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (i->first == j->first) {
      s += i->second * j->second;
      ++i;
      ++j;
    } else if (i->first < j->first) {
      ++i;
    } else {
      ++j;
    }
  }
  return s;
}

struct WeightedPair {
  std::uint32_t i, j;
  double w;
};

// Reference kernel: every pair by sorted-merge dot product.
std::vector<WeightedPair> cosine_pairs_serial(const CouplingMatrix& m, const std::vector<std::uint64_t>& sq) {
  std::vector<WeightedPair> out;
  for (std::size_t i = 0; i < m.vectors.size(); ++i) {
    for (std::size_t j = i + 1; j < m.vectors.size(); ++j) {
      const std::uint64_t d = dot(m.vectors[i], m.vectors[j]);
      if (d > 0) out.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), cosine_from(d, sq[i], sq[j])});
    }
  }
  return out;
}

// Rows in parallel against an inverted index of the cited keys. Dot products
// are exact integers, so the weights equal the serial kernel's bit for bit.
std::vector<WeightedPair> cosine_pairs_parallel(const CouplingMatrix& m, const std::vector<std::uint64_t>& sq) {
  const std::size_t n = m.vectors.size();
  std::vector<std::vector<std::pair<std::uint32_t, std::uint64_t>>> postings(m.keys.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [k, c] : m.vectors[i]) postings[k].emplace_back(static_cast<std::uint32_t>(i), c);
  }
  std::vector<std::vector<WeightedPair>> rows(n);
#pragma omp parallel
  {
    std::vector<std::uint64_t> acc(n, 0);
    std::vector<std::uint32_t> touched;
#pragma omp for schedule(dynamic, 8)
    for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(n); ++ii) {
      const auto i = static_cast<std::uint32_t>(ii);
      touched.clear();
      for (const auto& [k, c] : m.vectors[i]) {
        const auto& list = postings[k];
        auto it = std::upper_bound(list.begin(), list.end(), std::pair<std::uint32_t, std::uint64_t>{i, UINT64_MAX});
        for (; it != list.end(); ++it) {
          if (acc[it->first] == 0) touched.push_back(it->first);
          acc[it->first] += c * it->second;
        }
      }
      std::sort(touched.begin(), touched.end());
      auto& row = rows[i];
      for (const std::uint32_t j : touched) {
        row.push_back({i, j, cosine_from(acc[j], sq[i], sq[j])});
        acc[j] = 0;
      }
    }
  }
  std::vector<WeightedPair> out;
  for (auto& row : rows) out.insert(out.end(), row.begin(), row.end());
  return out;
}

}  // namespace

double cosine(const CouplingVector& a, const CouplingVector& b) {
  return cosine_from(dot(a, b), squared_norm(a), squared_norm(b));
}

double cosine_similarity(const CouplingMatrix& m, std::string_view venue_a, std::string_view venue_b) {
  return cosine(m.vector_of(venue_a), m.vector_of(venue_b));
}

Graph build_knowledge_network(const CouplingMatrix& m, Execution execution) {
  Graph g(false);
  for (std::size_t i = 0; i < m.venues.size(); ++i) g.add_node(m.venues[i], m.publication_counts[i]);
  std::vector<std::uint64_t> sq(m.vectors.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = squared_norm(m.vectors[i]);
  const auto pairs = execution == Execution::Parallel ? cosine_pairs_parallel(m, sq) : cosine_pairs_serial(m, sq);
  for (const auto& p : pairs) g.add_edge(p.i, p.j, p.w);
  return g;
}

Graph build_citation_network(const Corpus& corpus, const std::vector<MatchPair>* matches) {
  std::unordered_map<std::string, std::string> right_to_left;
  if (matches != nullptr) {
    for (const auto& m : *matches) right_to_left.emplace(m.right, m.left);
  }
  std::map<std::string, std::uint64_t> pubs;
  for (const auto& r : corpus.records()) {
    if (r.venue_key) ++pubs[*r.venue_key];
  }
  Graph g(true);
  for (const auto& [venue, count] : pubs) g.add_node(venue, count);

  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> counts;
  for (const auto& r : corpus.records()) {
    if (!r.venue_key) continue;
    const std::size_t from = *g.find(*r.venue_key);
    for (const auto& ref : r.references) {
      if (!ref.resolved) continue;
      const PublicationRecord* target = corpus.find(ref.target);
      if (target == nullptr) {
        const auto it = right_to_left.find(ref.target);
        if (it != right_to_left.end()) target = corpus.find(it->second);
      }
      if (target == nullptr || !target->venue_key) continue;
      const std::size_t to = *g.find(*target->venue_key);
      if (to == from) {
        ++g.node(from).self_citations;
      } else {
        ++counts[{from, to}];
      }
    }
  }
  for (const auto& [st, c] : counts) g.add_edge(st.first, st.second, static_cast<double>(c));
  return g;
}

Graph apply_threshold(const Graph& g, const Threshold& threshold) {
  const bool cosine_rule = threshold.rule == ThresholdRule::CosineMin;
  if (cosine_rule == g.directed()) {
    throw InputError(cosine_rule ? "cosine threshold requires an undirected (knowledge) network"
                                 : "citation threshold requires a directed (citation) network");
  }
  Graph filtered(g.directed());
  for (const auto& n : g.nodes()) {
    filtered.node(filtered.add_node(n.key)) = n;
  }
  std::vector<bool> keep(g.node_count(), false);
  for (const auto& e : g.edges()) {
    const bool pass = cosine_rule ? e.weight >= threshold.value : e.weight > threshold.value;
    if (!pass) continue;
    filtered.add_edge(e.source, e.target, e.weight);
    keep[e.source] = keep[e.target] = true;
  }
  return filtered.induced(keep);
}

NetworkSummary summarize(const Graph& g) {
  NetworkSummary s;
  s.nodes = g.node_count();
  s.edges = g.edge_count();
  s.components = metrics::component_count(g);
  s.density = metrics::density(g);
  s.clustering = metrics::average_clustering_coefficient(g);
  return s;
}

void write_summary_table(std::ostream& out, const std::vector<std::pair<std::string, NetworkSummary>>& columns) {
  std::vector<std::vector<std::string>> rows = {
      {"Property"}, {"Nodes"}, {"Edges"}, {"Components"}, {"Density"}, {"Clustering coef."}};
  for (const auto& [name, s] : columns) {
    std::ostringstream density, clustering;
    density << std::fixed << std::setprecision(3) << s.density * 100.0 << '%';
    clustering << std::fixed << std::setprecision(3) << s.clustering;
    rows[0].push_back(name);
    rows[1].push_back(std::to_string(s.nodes));
    rows[2].push_back(std::to_string(s.edges));
    rows[3].push_back(std::to_string(s.components));
    rows[4].push_back(density.str());
    rows[5].push_back(clustering.str());
  }
  std::vector<std::size_t> width(columns.size() + 1, 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c == 0) {
        out << std::left << std::setw(static_cast<int>(width[c])) << row[c];
      } else {
        out << "  " << std::right << std::setw(static_cast<int>(width[c])) << row[c];
      }
    }
    out << '\n';
  }
}

namespace {

void check_field(std::string_view s) {
  if (s.find_first_of("\t\n") != std::string_view::npos) {
    throw InputError("field \"" + std::string(s) + "\" contains a tab or newline");
  }
}

std::uint64_t parse_count(std::string_view s, std::size_t line) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("bad count \"" + std::string(s) + "\"", line);
  }
  return v;
}

}  // namespace

void write_coupling_tsv(std::ostream& out, const CouplingMatrix& m) {
  for (std::size_t i = 0; i < m.venues.size(); ++i) {
    check_field(m.venues[i]);
    out << "#venue\t" << m.venues[i] << '\t' << m.publication_counts[i] << '\n';
  }
  out << "venue\tcited_key\tcount\n";
  for (std::size_t i = 0; i < m.venues.size(); ++i) {
    for (const auto& [k, c] : m.vectors[i]) {
      check_field(m.keys[k]);
      out << m.venues[i] << '\t' << m.keys[k] << '\t' << c << '\n';
    }
  }
}

CouplingMatrix read_coupling_tsv(std::istream& in) {
  std::map<std::string, std::pair<std::uint64_t, std::vector<std::pair<std::string, std::uint64_t>>>> rows;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line == "venue\tcited_key\tcount") continue;
    const auto cols = text::split(line, '\t');
    if (cols[0] == "#venue") {
      if (cols.size() != 3) throw ParseError("expected #venue<TAB>key<TAB>publications", n);
      rows[std::string(cols[1])].first = parse_count(cols[2], n);
      continue;
    }
    if (cols.size() != 3) throw ParseError("expected venue<TAB>cited_key<TAB>count", n);
    rows[std::string(cols[0])].second.emplace_back(std::string(cols[1]), parse_count(cols[2], n));
  }
  std::vector<std::tuple<std::string, std::uint64_t, std::vector<std::pair<std::string, std::uint64_t>>>> flat;
  for (auto& [venue, row] : rows) flat.emplace_back(venue, row.first, std::move(row.second));
  return CouplingMatrix::from_rows(flat);
}

}  // namespace venuenet
