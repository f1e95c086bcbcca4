#include "venuenet/community.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <unordered_map>

#include "venuenet/error.hpp"
#include "venuenet/text.hpp"

namespace venuenet {

std::optional<std::size_t> ClusterPartition::cluster_of(std::string_view key) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] == key) return cluster[i];
  }
  return std::nullopt;
}

std::map<std::string, std::size_t> ClusterPartition::as_map() const {
  std::map<std::string, std::size_t> m;
  for (std::size_t i = 0; i < nodes.size(); ++i) m.emplace(nodes[i], cluster[i]);
  return m;
}

std::vector<std::vector<std::string>> ClusterPartition::members() const {
  std::vector<std::vector<std::string>> out(cluster_count);
  for (std::size_t i = 0; i < nodes.size(); ++i) out[cluster[i]].push_back(nodes[i]);
  for (auto& m : out) std::sort(m.begin(), m.end());
  return out;
}

double modularity(const Graph& g, const std::vector<std::size_t>& assignment, bool weighted) {
  if (assignment.size() != g.node_count()) throw InputError("assignment does not cover every node");
  const std::size_t clusters = assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
  std::vector<double> inside(clusters, 0.0), attached(clusters, 0.0);
  double total = 0.0;
  for (const auto& e : g.edges()) {
    const double w = weighted ? e.weight : 1.0;
    total += w;
    attached[assignment[e.source]] += w;
    attached[assignment[e.target]] += w;
    if (assignment[e.source] == assignment[e.target]) inside[assignment[e.source]] += w;
  }
  if (total == 0.0) return 0.0;
  double q = 0.0;
  for (std::size_t c = 0; c < clusters; ++c) {
    const double a = attached[c] / (2.0 * total);
    q += inside[c] / total - a * a;
  }
  return q;
}

double modularity(const Graph& g, const std::map<std::string, std::size_t>& assignment, bool weighted) {
  std::vector<std::size_t> a(g.node_count());
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto it = assignment.find(g.node(i).key);
    if (it == assignment.end()) throw InputError("node \"" + g.node(i).key + "\" has no cluster");
    a[i] = it->second;
  }
  return modularity(g, a, weighted);
}

namespace {

// Active clusters of the agglomeration, keyed by first node index.
class Agglomeration {
 public:
  Agglomeration(const Graph& g, bool weighted) : n_(g.node_count()), rows_(n_), a_(n_, 0.0), rep_(n_), active_(n_, 1) {
    double total = 0.0;
    std::vector<double> strength(n_, 0.0);
    for (const auto& e : g.edges()) {
      const double w = weighted ? e.weight : 1.0;
      total += w;
      strength[e.source] += w;
      strength[e.target] += w;
    }
    total_ = total;
    for (std::size_t i = 0; i < n_; ++i) {
      rep_[i] = g.node(i).key;
      if (total > 0.0) a_[i] = strength[i] / (2.0 * total);
    }
    if (total > 0.0) {
      for (const auto& e : g.edges()) {
        const double w = weighted ? e.weight : 1.0;
        const double dq = 2.0 * (w / (2.0 * total) - a_[e.source] * a_[e.target]);
        rows_[e.source][e.target] = dq;
        rows_[e.target][e.source] = dq;
      }
    }
    best_.assign(n_, std::nullopt);
    for (std::size_t i = 0; i < n_; ++i) refresh_best(i);
  }

  double initial_q() const {
    double q = 0.0;
    for (double a : a_) q -= a * a;
    return total_ > 0.0 ? q : 0.0;
  }

  // Best (dq, i, j) over all active rows, or nullopt when no pair remains.
  std::optional<std::tuple<double, std::size_t, std::size_t>> best_pair() const {
    std::optional<std::tuple<double, std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!active_[i] || !best_[i]) continue;
      const auto [dq, j] = *best_[i];
      if (!out || better(dq, i, j, std::get<0>(*out), std::get<1>(*out), std::get<2>(*out))) out = {{dq, i, j}};
    }
    return out;
  }

  // Merges clusters i and j; returns (survivor, absorbed).
  std::pair<std::size_t, std::size_t> merge(std::size_t i, std::size_t j) {
    std::size_t s = i, o = j;
    if (rep_[o] < rep_[s]) std::swap(s, o);
    std::map<std::size_t, double> merged;
    std::set<std::size_t> touched;
    for (const auto& [k, dq_ok] : rows_[o]) {
      if (k == s) continue;
      const auto it = rows_[s].find(k);
      merged[k] = it != rows_[s].end() ? it->second + dq_ok : dq_ok - 2.0 * a_[s] * a_[k];
      touched.insert(k);
    }
    for (const auto& [k, dq_sk] : rows_[s]) {
      if (k == o || merged.contains(k)) continue;
      merged[k] = dq_sk - 2.0 * a_[o] * a_[k];
      touched.insert(k);
    }
    for (const auto& [k, _] : rows_[o]) rows_[k].erase(o);
    for (const auto& [k, _] : rows_[s]) rows_[k].erase(s);
    rows_[o].clear();
    rows_[s] = std::move(merged);
    for (const auto& [k, dq] : rows_[s]) rows_[k][s] = dq;
    a_[s] += a_[o];
    a_[o] = 0.0;
    rep_[s] = std::min(rep_[s], rep_[o]);
    active_[o] = 0;
    best_[o].reset();
    refresh_best(s);
    for (std::size_t k : touched) refresh_best(k);
    return {s, o};
  }

 private:
  // Larger gain wins; equal gains go to the smaller (min rep, max rep) pair.
  bool better(double dq, std::size_t i, std::size_t j, double dq2, std::size_t i2, std::size_t j2) const {
    if (dq != dq2) return dq > dq2;
    const auto key = [&](std::size_t a, std::size_t b) {
      return rep_[a] < rep_[b] ? std::pair<const std::string&, const std::string&>(rep_[a], rep_[b])
                               : std::pair<const std::string&, const std::string&>(rep_[b], rep_[a]);
    };
    return key(i, j) < key(i2, j2);
  }

  void refresh_best(std::size_t i) {
    best_[i].reset();
    for (const auto& [k, dq] : rows_[i]) {
      if (!best_[i] || better(dq, i, k, best_[i]->first, i, best_[i]->second)) best_[i] = {dq, k};
    }
  }

  std::size_t n_;
  double total_ = 0.0;
  std::vector<std::map<std::size_t, double>> rows_;
  std::vector<double> a_;
  std::vector<std::string> rep_;
  std::vector<char> active_;
  std::vector<std::optional<std::pair<double, std::size_t>>> best_;
};

// Dense ids ordered by each cluster's smallest member key.
ClusterPartition relabel(const Graph& g, const std::vector<std::size_t>& root) {
  std::map<std::size_t, std::string> smallest;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    auto [it, inserted] = smallest.emplace(root[i], g.node(i).key);
    if (!inserted && g.node(i).key < it->second) it->second = g.node(i).key;
  }
  std::vector<std::pair<std::string, std::size_t>> order;
  for (const auto& [r, key] : smallest) order.emplace_back(key, r);
  std::sort(order.begin(), order.end());
  std::unordered_map<std::size_t, std::size_t> id;
  for (std::size_t c = 0; c < order.size(); ++c) id[order[c].second] = c;
  ClusterPartition p;
  p.cluster_count = order.size();
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    p.nodes.push_back(g.node(i).key);
    p.cluster.push_back(id[root[i]]);
  }
  return p;
}

}  // namespace

GreedyResult greedy_modularity_partition(const Graph& g, const GreedyOptions& options) {
  if (g.directed()) throw InputError("modularity clustering requires an undirected graph");
  GreedyResult result;
  Agglomeration state(g, options.weighted);
  std::vector<std::size_t> root(g.node_count());
  for (std::size_t i = 0; i < root.size(); ++i) root[i] = i;
  double q = state.initial_q();
  result.initial_q = q;
  while (true) {
    const auto best = state.best_pair();
    if (!best || !(std::get<0>(*best) > 0.0)) break;
    const auto [dq, i, j] = *best;
    const auto [s, o] = state.merge(i, j);
    for (auto& r : root) {
      if (r == o) r = s;
    }
    q += dq;
    result.merges.push_back({s, o, dq, q});
  }
  result.partition = relabel(g, root);
  result.partition.q = modularity(g, result.partition.cluster, options.weighted);
  return result;
}

std::string_view to_string(UnclusteredReason r) {
  return r == UnclusteredReason::Thresholded ? "thresholded" : "zero-cosine";
}

std::string cluster_key(std::size_t id) { return "C" + std::to_string(id); }

namespace {

CouplingVector add_vectors(const CouplingVector& a, const CouplingVector& b) {
  CouplingVector out;
  out.reserve(a.size() + b.size());
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() || j != b.end()) {
    if (j == b.end() || (i != a.end() && i->first < j->first)) {
      out.push_back(*i++);
    } else if (i == a.end() || j->first < i->first) {
      out.push_back(*j++);
    } else {
      out.emplace_back(i->first, i->second + j->second);
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

ClusterProjection project_to_cluster_network(const CouplingMatrix& m, const ClusterPartition& p, Execution execution) {
  const auto clustered = p.as_map();
  std::vector<CouplingVector> aggregate(p.cluster_count);
  std::vector<std::uint64_t> pubs(p.cluster_count, 0);
  std::vector<std::size_t> unclustered_rows;
  std::vector<std::size_t> key_users(m.keys.size(), 0);
  for (const auto& v : m.vectors) {
    for (const auto& [k, c] : v) ++key_users[k];
  }
  for (std::size_t i = 0; i < m.venues.size(); ++i) {
    const auto it = clustered.find(m.venues[i]);
    if (it == clustered.end()) {
      unclustered_rows.push_back(i);
      continue;
    }
    aggregate[it->second] = add_vectors(aggregate[it->second], m.vectors[i]);
    pubs[it->second] += m.publication_counts[i];
  }

  ClusterProjection out;
  {
    std::vector<std::tuple<std::string, std::uint64_t, std::vector<std::pair<std::string, std::uint64_t>>>> rows;
    for (std::size_t c = 0; c < aggregate.size(); ++c) {
      std::vector<std::pair<std::string, std::uint64_t>> counts;
      for (const auto& [k, n] : aggregate[c]) counts.emplace_back(m.keys[k], n);
      rows.emplace_back(cluster_key(c), pubs[c], std::move(counts));
    }
    for (std::size_t i : unclustered_rows) {
      std::vector<std::pair<std::string, std::uint64_t>> counts;
      for (const auto& [k, n] : m.vectors[i]) counts.emplace_back(m.keys[k], n);
      rows.emplace_back(m.venues[i], m.publication_counts[i], std::move(counts));
    }
    out.cluster_matrix = CouplingMatrix::from_rows(rows);
  }

  out.unclustered.resize(unclustered_rows.size());
  const auto count = static_cast<std::int64_t>(unclustered_rows.size());
#pragma omp parallel for schedule(dynamic, 4) if (execution == Execution::Parallel)
  for (std::int64_t u = 0; u < count; ++u) {
    const std::size_t i = unclustered_rows[u];
    UnclusteredVenue& v = out.unclustered[u];
    v.venue = m.venues[i];
    const bool shares_a_key = std::any_of(m.vectors[i].begin(), m.vectors[i].end(),
                                          [&](const auto& kc) { return key_users[kc.first] > 1; });
    v.reason = shares_a_key ? UnclusteredReason::Thresholded : UnclusteredReason::ZeroCosine;
    for (std::size_t c = 0; c < aggregate.size(); ++c) {
      const double s = cosine(m.vectors[i], aggregate[c]);
      if (s > v.cosine) {  // strict: ties keep the smaller id
        v.cosine = s;
        v.cluster = c;
      }
    }
  }

  out.assignment = clustered;
  std::vector<CouplingVector> final_aggregate = aggregate;
  std::vector<std::size_t> venue_counts(p.cluster_count, 0);
  for (const auto& [venue, c] : clustered) {
    if (m.venue_index(venue)) ++venue_counts[c];
  }
  for (std::size_t u = 0; u < unclustered_rows.size(); ++u) {
    const auto& v = out.unclustered[u];
    if (!v.cluster) continue;
    out.assignment.emplace(v.venue, *v.cluster);
    const std::size_t i = unclustered_rows[u];
    final_aggregate[*v.cluster] = add_vectors(final_aggregate[*v.cluster], m.vectors[i]);
    pubs[*v.cluster] += m.publication_counts[i];
    ++venue_counts[*v.cluster];
  }

  for (std::size_t c = 0; c < p.cluster_count; ++c) {
    const std::size_t idx = out.cluster_graph.add_node(cluster_key(c), pubs[c]);
    out.cluster_graph.node(idx).attributes["venues"] = std::to_string(venue_counts[c]);
  }
  for (std::size_t a = 0; a < p.cluster_count; ++a) {
    for (std::size_t b = a + 1; b < p.cluster_count; ++b) {
      const double s = cosine(final_aggregate[a], final_aggregate[b]);
      if (s > 0.0) out.cluster_graph.add_edge(a, b, s);
    }
  }
  return out;
}

std::vector<std::map<std::string, std::size_t>> domain_composition(const std::map<std::string, std::size_t>& assignment,
                                                                   std::size_t cluster_count,
                                                                   const std::map<std::string, std::string>& domains) {
  std::vector<std::map<std::string, std::size_t>> out(cluster_count);
  for (const auto& [venue, c] : assignment) {
    const auto it = domains.find(venue);
    ++out.at(c)[it == domains.end() ? std::string("uncategorized") : it->second];
  }
  return out;
}

void write_partition_tsv(std::ostream& out, const ClusterPartition& p) {
  out << "venue_key\tcluster_id\n";
  for (const auto& [venue, c] : p.as_map()) out << venue << '\t' << c << '\n';
}

ClusterPartition read_partition_tsv(std::istream& in) {
  ClusterPartition p;
  std::string line;
  std::size_t n = 0;
  std::set<std::size_t> ids;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line == "venue_key\tcluster_id") continue;
    const auto cols = text::split(line, '\t');
    if (cols.size() != 2) throw ParseError("expected venue_key<TAB>cluster_id", n);
    std::size_t c = 0;
    const auto [ptr, ec] = std::from_chars(cols[1].data(), cols[1].data() + cols[1].size(), c);
    if (ec != std::errc() || ptr != cols[1].data() + cols[1].size()) throw ParseError("bad cluster id", n);
    p.nodes.emplace_back(cols[0]);
    p.cluster.push_back(c);
    ids.insert(c);
  }
  p.cluster_count = ids.empty() ? 0 : *ids.rbegin() + 1;
  return p;
}

}  // namespace venuenet
