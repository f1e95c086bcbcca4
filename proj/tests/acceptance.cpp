// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "oracles.hpp"
#include "venuenet/community.hpp"
#include "venuenet/linkage.hpp"
#include "venuenet/metrics.hpp"
#include "venuenet/network.hpp"
#include "venuenet/pipeline.hpp"
#include "venuenet/subgraphs.hpp"

using namespace venuenet;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const std::string& name, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS  " : "FAIL  ") << name << "  " << o.detail << std::endl;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("venuenet_acceptance_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool same_grouping(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
  return true;
}

Outcome metric_oracles() {
  const auto t0 = Clock::now();
  gen::Rng rng(20240601);
  std::uniform_int_distribution<std::size_t> size(1, 12);
  std::uniform_real_distribution<double> density(0.1, 0.7);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const bool directed = t % 2 == 1;
    const bool weighted = (t / 2) % 2 == 1;
    const Graph g = gen::random_graph(rng, size(rng), density(rng), directed, weighted);
    for (bool norm : {false, true}) {
      const auto got = metrics::betweenness_centrality(g, {.weighted = weighted, .normalized = norm}).values;
      const auto want = oracle::betweenness(g, weighted, norm);
      for (std::size_t i = 0; i < want.size(); ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
    }
    worst = std::max(worst, std::abs(metrics::density(g) - oracle::density(g)));
    const auto lc = metrics::local_clustering(g);
    const auto lw = oracle::local_clustering(g);
    for (std::size_t i = 0; i < lw.size(); ++i) worst = std::max(worst, std::abs(lc[i] - lw[i]));
    worst = std::max(worst, std::abs(metrics::average_clustering_coefficient(g) - oracle::average_clustering(g)));
    worst = std::max(worst, std::abs(metrics::largest_component_fraction(g) - oracle::largest_component_fraction(g)));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && secs < 30.0, fmt("200 graphs, max |diff| %.3g (tol 1e-9), %.2f s (limit 30 s)", worst, secs)};
}

Outcome pagerank_fixed_point() {
  gen::Rng rng(77);
  const double tol = 1e-8;
  double worst_dev = 0.0, worst_res = 0.0;
  std::size_t graphs = 0;
  for (std::size_t n = 2; n <= 50; ++n) {
    for (std::size_t k = 1; k < n && k <= 6; ++k) {
      const Graph g = gen::regular_digraph(rng, n, k);
      const auto r = metrics::pagerank(g, {.damping = 0.85, .tolerance = tol});
      for (double v : r.scores.values) worst_dev = std::max(worst_dev, std::abs(v - 1.0));
      worst_res = std::max(worst_res, oracle::pagerank_residual(g, r.scores.values, 0.85));
      ++graphs;
    }
  }
  for (int t = 0; t < 100; ++t) {
    const Graph g = gen::random_graph(rng, 5 + t % 46, 0.1, true, t % 2 == 0);
    const auto r = metrics::pagerank(g, {.damping = 0.85, .tolerance = tol});
    worst_res = std::max(worst_res, oracle::pagerank_residual(g, r.scores.values, 0.85));
    ++graphs;
  }
  return {worst_dev <= 1e-6 && worst_res < tol,
          fmt("%.0f graphs, max |P-1| %.3g (tol 1e-6), max residual %.3g (tol 1e-8)", static_cast<double>(graphs), worst_dev,
              worst_res)};
}

Outcome smith_waterman_exact() {
  gen::Rng rng(99);
  std::uniform_int_distribution<std::size_t> len(0, 64);
  std::size_t mismatches = 0;
  for (int t = 0; t < 10000; ++t) {
    const int alphabet = t % 3 == 0 ? 2 : (t % 3 == 1 ? 4 : 27);
    std::uniform_int_distribution<int> ch(0, alphabet - 1);
    std::string a(len(rng), ' '), b(len(rng), ' ');
    for (char& c : a) c = static_cast<char>(alphabet == 27 && ch(rng) == 26 ? ' ' : 'a' + ch(rng) % 26);
    for (char& c : b) c = static_cast<char>(alphabet == 27 && ch(rng) == 26 ? ' ' : 'a' + ch(rng) % 26);
    if (smith_waterman_score(a, b) != oracle::smith_waterman(a, b)) ++mismatches;
  }
  return {mismatches == 0, fmt("10000 pairs, %.0f mismatches", static_cast<double>(mismatches))};
}

Outcome linkage_recall() {
  gen::Rng rng(4242);
  const auto fx = gen::linkage_fixture(rng, 1000);
  const auto t0 = Clock::now();
  const auto matches = link_corpora(fx.left, fx.right);
  const double secs = seconds_since(t0);
  std::size_t hit = 0, wrong = 0;
  for (const auto& m : matches) {
    if (fx.planted.count({m.left, m.right})) {
      ++hit;
    } else {
      ++wrong;
    }
  }
  const double recall = static_cast<double>(hit) / static_cast<double>(fx.planted.size());
  const double false_rate = matches.empty() ? 0.0 : static_cast<double>(wrong) / static_cast<double>(matches.size());
  return {recall >= 0.99 && false_rate <= 0.01 && secs < 10.0,
          fmt("recall %.4f (min 0.99), false %.4f (max 0.01), %.2f s (limit 10 s)", recall, false_rate, secs)};
}

Outcome modularity_quality() {
  Graph tri(false);
  for (const char* k : {"a", "b", "c", "d", "e", "f"}) tri.add_node(k);
  for (auto [x, y] : {std::pair{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}) tri.add_edge(x, y, 1.0);
  const double q_tri = greedy_modularity_partition(tri).partition.q;

  gen::Rng rng(555);
  std::uniform_int_distribution<std::size_t> clique(8, 12);
  int recovered = 0;
  for (int t = 0; t < 100; ++t) {
    const auto planted = gen::two_cliques(rng, clique(rng), clique(rng));
    const auto p = greedy_modularity_partition(planted.graph).partition;
    std::vector<std::size_t> truth;
    for (const auto& n : planted.graph.nodes()) truth.push_back(planted.label.at(n.key));
    recovered += p.cluster_count == 2 && same_grouping(p.cluster, truth);
  }

  double gap[2] = {0.0, 0.0};  // unweighted, weighted
  for (int t = 0; t < 150; ++t) {
    const bool weighted = t % 2 == 0;
    const Graph g = gen::random_graph(rng, 2 + t % 7, 0.2 + 0.1 * (t % 5), false, weighted);
    const double greedy = greedy_modularity_partition(g).partition.q;
    gap[weighted] = std::max(gap[weighted], oracle::best_partition(g).q - greedy);
  }
  const double worst_gap = std::max(gap[0], gap[1]);
  return {q_tri == 0.5 && recovered == 100 && worst_gap <= 0.05,
          fmt("two triangles Q=%.17g, planted %.0f/100, gap to optimum unweighted %.4f weighted %.4f (max 0.05)", q_tri,
              static_cast<double>(recovered), gap[0], gap[1])};
}

Outcome end_to_end() {
  const fs::path dir = scratch("e2e");
  gen::Rng rng(30303);
  const auto tc = gen::topic_corpus(rng, 30, 3);
  write_file(dir / "corpus.jsonl", to_canonical(tc.corpus));
  PipelineConfig cfg;
  cfg.metadata_input = (dir / "corpus.jsonl").string();
  cfg.metadata_format = CorpusFormat::CanonicalJsonl;
  cfg.output_dir = (dir / "run1").string();
  cfg.slice_years = {2005};

  const auto t0 = Clock::now();
  const RunManifest a = run_pipeline(cfg);
  const double secs = seconds_since(t0);
  cfg.output_dir = (dir / "run2").string();
  const RunManifest b = run_pipeline(cfg);

  bool identical = a.stages == b.stages && a.snapshots == b.snapshots;
  std::size_t files = 0;
  for (const auto& s : a.stages) {
    for (const auto& art : s.outputs) {
      identical = identical && read_file(dir / "run1" / art.path) == read_file(dir / "run2" / art.path);
      ++files;
    }
  }

  std::ifstream pin(dir / "run1" / "cluster" / "partition.tsv");
  const auto p = read_partition_tsv(pin).as_map();
  std::vector<std::size_t> truth, got;
  bool covered = p.size() == tc.group.size();
  for (const auto& [venue, g] : tc.group) {
    const auto it = p.find(venue);
    if (it == p.end()) {
      covered = false;
      continue;
    }
    truth.push_back(g);
    got.push_back(it->second);
  }
  std::set<std::size_t> clusters(got.begin(), got.end());
  const bool exact = covered && clusters.size() == 3 && same_grouping(got, truth);
  std::ostringstream detail;
  detail << "30 venues, " << clusters.size() << " clusters, planted split " << (exact ? "matched" : "NOT matched")
         << ", rerun of " << files << " artifacts " << (identical ? "byte-identical" : "DIFFERS") << ", "
         << fmt("%.2f s (limit 60 s)", secs);
  return {a.complete && exact && identical && secs < 60.0, detail.str()};
}

Outcome archetypes() {
  std::ostringstream detail;
  int total = 0;
  bool all = true;
  for (NetworkType t : {NetworkType::Type1, NetworkType::Type2, NetworkType::Type3, NetworkType::Type4}) {
    int right = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      gen::Rng rng(0xA5C0 + 1000 * static_cast<std::uint64_t>(t) + seed);
      right += classify_network_type(subgraph_profile(gen::archetype(rng, t, 100))) == t;
    }
    total += right;
    all = all && right >= 48;  // 95% of 50, rounded up
    detail << to_string(t) << " " << right << "/50 ";
  }
  detail << "(min 95%), overall " << total << "/200";
  return {all, detail.str()};
}

Outcome thresholds() {
  Graph k(false);
  for (const char* n : {"a", "b", "c", "d"}) k.add_node(n);
  k.add_edge("a", "b", 0.1);
  k.add_edge("c", "d", 0.0999);
  const Graph kp = apply_threshold(k, Threshold::cosine_min(0.1));
  const bool cos_ok = kp.edge_count() == 1 && kp.find("a") && kp.find("b") && !kp.find("c") && kp.edges()[0].weight == 0.1;

  Graph f(true);
  for (const char* n : {"a", "b", "c", "d"}) f.add_node(n);
  f.add_edge("a", "b", 50.0);
  f.add_edge("c", "d", 51.0);
  const Graph fp = apply_threshold(f, Threshold::citation_min_exclusive(50.0));
  const bool cit_ok = fp.edge_count() == 1 && fp.find("c") && !fp.find("a") && fp.edges()[0].weight == 51.0;
  return {cos_ok && cit_ok, std::string("cosine 0.1 kept / 0.0999 dropped: ") + (cos_ok ? "yes" : "no") +
                                ", citation 50 dropped / 51 kept: " + (cit_ok ? "yes" : "no")};
}

Outcome scale() {
  const fs::path dir = scratch("scale");
  gen::Rng rng(1000100);
  write_file(dir / "corpus.jsonl", gen::scale_corpus_jsonl(rng, 100000, 1000));
  PipelineConfig cfg;
  cfg.metadata_input = (dir / "corpus.jsonl").string();
  cfg.metadata_format = CorpusFormat::CanonicalJsonl;
  cfg.output_dir = (dir / "out").string();
  const auto t0 = Clock::now();
  const RunManifest m = run_pipeline(cfg);
  const double secs = seconds_since(t0);
  rusage ru{};
  getrusage(RUSAGE_SELF, &ru);
  const double peak_gb = static_cast<double>(ru.ru_maxrss) / (1024.0 * 1024.0);
  fs::remove_all(dir);
  return {m.complete && secs < 300.0 && peak_gb < 4.0,
          fmt("100000 publications / 1000 venues, ingest..stats %.1f s (limit 300 s), peak RSS %.2f GB (limit 4 GB)", secs,
              peak_gb)};
}

}  // namespace

int main() {
  report("metric oracle equivalence", metric_oracles);
  report("pagerank fixed point", pagerank_fixed_point);
  report("smith-waterman exactness", smith_waterman_exact);
  report("linkage recall", linkage_recall);
  report("modularity", modularity_quality);
  report("end-to-end fixture", end_to_end);
  report("archetype classification", archetypes);
  report("threshold semantics", thresholds);
  report("scale smoke test", scale);
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria failing") << std::endl;
  return failures == 0 ? 0 : 1;
}
