#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "venuenet/community.hpp"
#include "venuenet/corpus.hpp"
#include "venuenet/error.hpp"
#include "venuenet/graph_io.hpp"
#include "venuenet/linkage.hpp"
#include "venuenet/metrics.hpp"
#include "venuenet/network.hpp"
#include "venuenet/pipeline.hpp"
#include "venuenet/subgraphs.hpp"

using namespace venuenet;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitStage = 2;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open \"" + path + "\"");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// "-" writes to stdout.
void emit(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path == "-") {
    body(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError(path);
  body(out);
  out.flush();
  if (!out) throw OutputError(path);
}

Corpus load_corpus(const std::string& path) {
  return parse_corpus(std::string_view(slurp(path)), CorpusFormat::CanonicalJsonl);
}

Graph load_graph(const std::string& path, const std::string& format = "edge-tsv") {
  return import_graph(std::string_view(slurp(path)), parse_graph_format(format));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Venue network analysis over linked bibliographic corpora"};
  app.require_subcommand(1);
  bool serial = false;
  app.add_flag("--serial", serial, "Use the serial reference kernels");
  std::function<void()> action;
  auto exec = [&] { return serial ? Execution::Serial : Execution::Parallel; };

  // ingest
  std::string in_path, out_path = "-", format = "jsonl", source = "metadata";
  auto* ingest = app.add_subcommand("ingest", "Parse a corpus into the canonical line format");
  ingest->add_option("input", in_path, "Input file")->required();
  ingest->add_option("--format", format, "jsonl or dblp-xml")->check(CLI::IsMember({"jsonl", "dblp-xml"}));
  ingest->add_option("--source", source, "Default record source")->check(CLI::IsMember({"metadata", "citation"}));
  ingest->add_option("--out", out_path, "Output corpus (canonical JSONL)");
  ingest->callback([&] {
    action = [&] {
      const Corpus c = parse_corpus(std::string_view(slurp(in_path)), parse_corpus_format(format), parse_source(source));
      const ValidationReport r = validate_corpus(c);
      std::cerr << c.size() << " records, " << c.venues().size() << " venues, " << r.resolved_references
                << " resolved and " << r.unresolved_references << " unresolved references\n";
      if (!r.dangling_venue_keys.empty()) {
        std::cerr << r.dangling_venue_keys.size() << " venue keys without a venue entry\n";
      }
      emit(out_path, [&](std::ostream& o) { write_canonical(o, c); });
    };
  });

  // slice
  int year = 0;
  auto* slice = app.add_subcommand("slice", "Keep records published up to a year");
  slice->add_option("corpus", in_path, "Canonical corpus")->required();
  slice->add_option("--year", year, "Cutoff year (inclusive)")->required();
  slice->add_option("--out", out_path, "Output corpus");
  slice->callback([&] {
    action = [&] { emit(out_path, [&](std::ostream& o) { write_canonical(o, slice_by_year(load_corpus(in_path), year)); }); };
  });

  // link
  std::string left_path, right_path, merged_out;
  LinkageOptions link_opt;
  auto* link = app.add_subcommand("link", "Match metadata records against citation records");
  link->add_option("--left", left_path, "Metadata corpus")->required();
  link->add_option("--right", right_path, "Citation corpus")->required();
  link->add_option("--jaccard-min", link_opt.jaccard_min, "Title token Jaccard gate")->check(CLI::Range(0.0, 1.0));
  link->add_option("--sw-min", link_opt.sw_min, "Smith-Waterman similarity gate")->check(CLI::Range(0.0, 1.0));
  link->add_option("--out", out_path, "Match table");
  link->add_option("--merged-out", merged_out, "Also write the merged corpus");
  link->callback([&] {
    action = [&] {
      const Corpus left = load_corpus(left_path);
      const Corpus right = load_corpus(right_path);
      link_opt.execution = exec();
      const auto matches = link_corpora(left, right, link_opt);
      std::cerr << matches.size() << " of " << left.size() << " records matched\n";
      emit(out_path, [&](std::ostream& o) { write_matches_tsv(o, matches); });
      if (!merged_out.empty()) {
        emit(merged_out, [&](std::ostream& o) { write_canonical(o, attach_references(left, right, matches)); });
      }
    };
  });

  // build
  std::string network = "knowledge", coupling_out;
  std::optional<double> build_threshold;
  auto* build = app.add_subcommand("build", "Build the knowledge or citation network");
  build->add_option("corpus", in_path, "Merged canonical corpus")->required();
  build->add_option("--network", network, "knowledge or citation")->check(CLI::IsMember({"knowledge", "citation"}));
  build->add_option("--threshold", build_threshold, "Apply the network's threshold rule with this value");
  build->add_option("--coupling-out", coupling_out, "Also write the coupling matrix");
  build->add_option("--out", out_path, "Edge list");
  build->callback([&] {
    action = [&] {
      const Corpus c = load_corpus(in_path);
      Graph g;
      if (network == "knowledge") {
        const CouplingMatrix m = build_coupling_matrix(c);
        if (!coupling_out.empty()) emit(coupling_out, [&](std::ostream& o) { write_coupling_tsv(o, m); });
        g = build_knowledge_network(m, exec());
        if (build_threshold) g = apply_threshold(g, Threshold::cosine_min(*build_threshold));
      } else {
        if (!coupling_out.empty()) {
          emit(coupling_out, [&](std::ostream& o) { write_coupling_tsv(o, build_coupling_matrix(c)); });
        }
        g = build_citation_network(c);
        if (build_threshold) g = apply_threshold(g, Threshold::citation_min_exclusive(*build_threshold));
      }
      emit(out_path, [&](std::ostream& o) { export_graph(o, g, GraphFormat::EdgeTsv); });
    };
  });

  // threshold
  std::string graph_path, rule = "cosine";
  std::optional<double> value;
  auto* threshold = app.add_subcommand("threshold", "Threshold a network and drop isolated venues");
  threshold->add_option("graph", graph_path, "Edge list")->required();
  threshold->add_option("--rule", rule, "cosine (>=) or citation (>)")->check(CLI::IsMember({"cosine", "citation"}));
  threshold->add_option("--value", value, "Threshold value (default 0.1 or 50)");
  threshold->add_option("--out", out_path, "Edge list");
  threshold->callback([&] {
    action = [&] {
      const Threshold t = rule == "cosine" ? Threshold::cosine_min(value.value_or(0.1))
                                           : Threshold::citation_min_exclusive(value.value_or(50.0));
      const Graph g = apply_threshold(load_graph(graph_path), t);
      emit(out_path, [&](std::ostream& o) { export_graph(o, g, GraphFormat::EdgeTsv); });
    };
  });

  // cluster
  bool unweighted = false;
  auto* cluster = app.add_subcommand("cluster", "Greedy modularity clustering of a knowledge network");
  cluster->add_option("--graph", graph_path, "Thresholded knowledge network")->required();
  cluster->add_flag("--unweighted", unweighted, "Ignore edge weights");
  cluster->add_option("--out", out_path, "Partition table");
  cluster->callback([&] {
    action = [&] {
      const GreedyResult r = greedy_modularity_partition(load_graph(graph_path), {.weighted = !unweighted});
      std::cerr << r.partition.cluster_count << " clusters, Q = " << r.partition.q << '\n';
      emit(out_path, [&](std::ostream& o) { write_partition_tsv(o, r.partition); });
    };
  });

  // project
  std::string matrix_path, partition_path, unclustered_out;
  auto* project = app.add_subcommand("project", "Project venues onto the cluster network");
  project->add_option("--matrix", matrix_path, "Coupling matrix")->required();
  project->add_option("--partition", partition_path, "Partition table")->required();
  project->add_option("--unclustered-out", unclustered_out, "Also write the un-clustered venue table");
  project->add_option("--out", out_path, "Cluster network edge list");
  project->callback([&] {
    action = [&] {
      std::istringstream ms(slurp(matrix_path)), ps(slurp(partition_path));
      const CouplingMatrix m = read_coupling_tsv(ms);
      const ClusterPartition p = read_partition_tsv(ps);
      const ClusterProjection proj = project_to_cluster_network(m, p, exec());
      emit(out_path, [&](std::ostream& o) { export_graph(o, proj.cluster_graph, GraphFormat::EdgeTsv); });
      if (!unclustered_out.empty()) {
        emit(unclustered_out, [&](std::ostream& o) {
          o << "venue_key\treason\tcluster_id\tcosine\n";
          for (const auto& u : proj.unclustered) {
            o << u.venue << '\t' << to_string(u.reason) << '\t'
              << (u.cluster ? std::to_string(*u.cluster) : std::string("NA")) << '\t' << u.cosine << '\n';
          }
        });
      }
    };
  });

  // metrics
  std::string metric = "betweenness";
  bool normalized = false, weighted = false;
  metrics::PageRankOptions pr_opt;
  auto* metrics_cmd = app.add_subcommand("metrics", "Graph-level or per-venue metrics");
  metrics_cmd->add_option("--graph", graph_path, "Edge list")->required();
  metrics_cmd->add_option("--metric", metric, "density, clustering, betweenness, pagerank or lcc")
      ->check(CLI::IsMember({"density", "clustering", "betweenness", "pagerank", "lcc"}));
  metrics_cmd->add_option("--d", pr_opt.damping, "PageRank damping factor");
  metrics_cmd->add_option("--tol", pr_opt.tolerance, "PageRank tolerance");
  metrics_cmd->add_option("--max-iter", pr_opt.max_iterations, "PageRank iteration cap");
  metrics_cmd->add_flag("--normalized", normalized, "Normalize betweenness");
  metrics_cmd->add_flag("--weighted", weighted, "Betweenness over 1/weight distances");
  metrics_cmd->add_option("--out", out_path, "Output");
  metrics_cmd->callback([&] {
    action = [&] {
      const Graph g = load_graph(graph_path);
      if (metric == "density" || metric == "lcc") {
        const double v = metric == "density" ? metrics::density(g) : metrics::largest_component_fraction(g);
        emit(out_path, [&](std::ostream& o) { o << metric << '\t' << v << '\n'; });
        return;
      }
      MetricVector mv;
      if (metric == "clustering") {
        mv.metric = "clustering";
        mv.values = metrics::local_clustering(g);
        for (const auto& n : g.nodes()) mv.keys.push_back(n.key);
      } else if (metric == "betweenness") {
        mv = metrics::betweenness_centrality(g, {.weighted = weighted, .normalized = normalized, .execution = exec()});
      } else {
        pr_opt.execution = exec();
        const auto r = metrics::pagerank(g, pr_opt);
        std::cerr << (r.converged ? "converged" : "did not converge") << " after " << r.iterations
                  << " iterations, residual " << r.residual << '\n';
        mv = r.scores;
      }
      emit(out_path, [&](std::ostream& o) { write_metric_tsv(o, mv); });
    };
  });

  // subgraphs
  std::string venue_kind = "all", pagerank_path;
  std::vector<double> cuts;
  auto* subgraphs = app.add_subcommand("subgraphs", "Profile and classify venue subgraphs");
  subgraphs->add_option("corpus", in_path, "Merged canonical corpus")->required();
  subgraphs->add_option("--venue-kind", venue_kind, "all, journal or conference")
      ->check(CLI::IsMember({"all", "journal", "conference"}));
  subgraphs->add_option("--pagerank", pagerank_path, "Venue PageRank table from the metrics command");
  subgraphs->add_option("--cuts", cuts, "Four band cuts")->expected(4)->delimiter(',');
  subgraphs->add_option("--out", out_path, "Profile table");
  subgraphs->callback([&] {
    action = [&] {
      const Corpus c = load_corpus(in_path);
      std::map<std::string, double> pr;
      if (!pagerank_path.empty()) {
        std::istringstream in(slurp(pagerank_path));
        pr = read_metric_tsv(in);
      }
      std::set<std::string> venues;
      for (const auto& r : c.records()) {
        if (!r.venue_key) continue;
        const VenueInfo* info = c.venue(*r.venue_key);
        const VenueKind kind = info ? info->kind : VenueKind::Conference;
        if (venue_kind == "all" || to_string(kind) == venue_kind) venues.insert(*r.venue_key);
      }
      ClassificationScheme scheme = ClassificationScheme::standard();
      if (!cuts.empty()) scheme.cuts = {cuts[0], cuts[1], cuts[2], cuts[3]};
      const auto profiles = profile_venues(c, {venues.begin(), venues.end()}, pr, scheme, exec());
      emit(out_path, [&](std::ostream& o) { write_profiles_tsv(o, profiles); });
    };
  });

  // stats
  std::size_t bins = 20;
  auto* stats = app.add_subcommand("stats", "Histograms and PageRank medians of venue profiles");
  stats->add_option("profiles", in_path, "Profile table")->required();
  stats->add_option("--bins", bins, "Histogram bins")->check(CLI::PositiveNumber);
  stats->add_option("--out", out_path, "Long-format table");
  stats->callback([&] {
    action = [&] {
      std::istringstream in(slurp(in_path));
      const StatReport report = profile_statistics(read_profiles_tsv(in), bins);
      emit(out_path, [&](std::ostream& o) { write_stats_tsv(o, report); });
    };
  });

  // export
  std::string from = "edge-tsv", to = "graphml";
  auto* exp = app.add_subcommand("export", "Convert a graph between edge-tsv, graphml and json");
  exp->add_option("graph", graph_path, "Input graph")->required();
  exp->add_option("--from", from, "Input format")->check(CLI::IsMember({"edge-tsv", "graphml", "json"}));
  exp->add_option("--format", to, "Output format")->check(CLI::IsMember({"edge-tsv", "graphml", "json"}));
  exp->add_option("--out", out_path, "Output");
  exp->callback([&] {
    action = [&] {
      const Graph g = load_graph(graph_path, from);
      emit(out_path, [&](std::ostream& o) { export_graph(o, g, parse_graph_format(to)); });
    };
  });

  // run
  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the whole pipeline from a config file");
  run->add_option("config", config_path, "Pipeline config")->required();
  run->callback([&] {
    action = [&] {
      const RunManifest m = run_pipeline(load_config(config_path), exec());
      std::size_t files = 0;
      for (const auto& s : m.stages) files += s.outputs.size();
      std::cerr << m.stages.size() << " stages, " << files << " files, " << m.snapshots.size() << " snapshots\n";
      std::cout << (std::filesystem::path(m.config.output_dir) / "manifest.json").string() << '\n';
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    action();
  } catch (const StageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitStage;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitStage;
  }
  return 0;
}
