#include "venuenet/pipeline.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iterator>
#include <set>
#include <sstream>

#include <json.hpp>

#include "venuenet/community.hpp"
#include "venuenet/graph_io.hpp"
#include "venuenet/metrics.hpp"
#include "venuenet/network.hpp"
#include "venuenet/text.hpp"

namespace venuenet {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_value(std::string_view key, std::string_view s) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw InputError("config key " + std::string(key) + ": bad value \"" + std::string(s) + "\"");
  }
  return v;
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      out += fmt(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

template <typename T>
std::vector<T> parse_list(std::string_view key, std::string_view s) {
  std::vector<T> out;
  if (s.empty()) return out;
  for (std::string_view part : text::split(s, ',')) out.push_back(parse_value<T>(key, trim(part)));
  return out;
}

std::vector<std::pair<std::string, std::string>> config_entries(const PipelineConfig& c) {
  return {
      {"metadata_input", c.metadata_input},
      {"metadata_format", std::string(to_string(c.metadata_format))},
      {"citation_input", c.citation_input},
      {"citation_format", std::string(to_string(c.citation_format))},
      {"jaccard_min", fmt(c.jaccard_min)},
      {"sw_min", fmt(c.sw_min)},
      {"sw_match", std::to_string(c.scoring.match)},
      {"sw_mismatch", std::to_string(c.scoring.mismatch)},
      {"sw_gap", std::to_string(c.scoring.gap)},
      {"cosine_min", fmt(c.cosine_min)},
      {"citation_min", fmt(c.citation_min)},
      {"pagerank_damping", fmt(c.damping)},
      {"pagerank_tolerance", fmt(c.tolerance)},
      {"pagerank_max_iterations", std::to_string(c.max_iterations)},
      {"band_cuts", join(std::vector<double>{c.cuts.very_low, c.cuts.low, c.cuts.medium, c.cuts.high})},
      {"histogram_bins", std::to_string(c.histogram_bins)},
      {"slice_years", join(c.slice_years)},
      {"output_dir", c.output_dir},
  };
}

void check_path_field(std::string_view key, const std::string& v) {
  if (v != trim(v) || v.find('\n') != std::string::npos) {
    throw InputError("config key " + std::string(key) + ": surrounding whitespace or line breaks are not allowed");
  }
}

}  // namespace

void PipelineConfig::validate() const {
  auto fail = [](std::string_view key, std::string_view why) {
    throw InputError("config key " + std::string(key) + ": " + std::string(why));
  };
  auto unit = [&](std::string_view key, double v) {
    if (!(v >= 0.0 && v <= 1.0)) fail(key, "must lie in [0, 1]");
  };
  if (metadata_input.empty()) fail("metadata_input", "required");
  check_path_field("metadata_input", metadata_input);
  check_path_field("citation_input", citation_input);
  if (output_dir.empty()) fail("output_dir", "required");
  check_path_field("output_dir", output_dir);
  unit("jaccard_min", jaccard_min);
  unit("sw_min", sw_min);
  if (scoring.match <= 0) fail("sw_match", "must be positive");
  if (scoring.mismatch > 0) fail("sw_mismatch", "must not be positive");
  if (scoring.gap > 0) fail("sw_gap", "must not be positive");
  if (!(cosine_min > 0.0 && cosine_min <= 1.0)) fail("cosine_min", "must lie in (0, 1]");
  if (!(citation_min >= 0.0) || !std::isfinite(citation_min)) fail("citation_min", "must be a finite non-negative number");
  if (!(damping > 0.0 && damping < 1.0)) fail("pagerank_damping", "must lie in (0, 1)");
  if (!(tolerance > 0.0) || !std::isfinite(tolerance)) fail("pagerank_tolerance", "must be positive");
  if (max_iterations < 1) fail("pagerank_max_iterations", "must be at least 1");
  if (!(0.0 < cuts.very_low && cuts.very_low < cuts.low && cuts.low < cuts.medium && cuts.medium < cuts.high &&
        cuts.high <= 1.0)) {
    fail("band_cuts", "must be strictly increasing within (0, 1]");
  }
  if (histogram_bins < 1 || histogram_bins > 100000) fail("histogram_bins", "must lie in [1, 100000]");
  for (std::size_t i = 0; i < slice_years.size(); ++i) {
    if (slice_years[i] < kMinYear || slice_years[i] > kMaxYear) fail("slice_years", "year out of range");
    if (i && slice_years[i] <= slice_years[i - 1]) fail("slice_years", "must be strictly ascending");
  }
}

std::string to_config_text(const PipelineConfig& cfg) {
  std::string out = "schema = " + std::string(kConfigSchema) + "\n";
  for (const auto& [k, v] : config_entries(cfg)) out += k + " = " + v + "\n";
  return out;
}

PipelineConfig parse_config(std::string_view text) {
  PipelineConfig c;
  bool schema = false;
  std::set<std::string> seen;
  std::size_t pos = 0, line_no = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line_no);
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (!seen.insert(key).second) throw ParseError("duplicate key " + key, line_no);
    if (key == "schema") {
      if (value != kConfigSchema) throw ParseError("unsupported schema \"" + value + "\"", line_no);
      schema = true;
    } else if (key == "metadata_input") {
      c.metadata_input = value;
    } else if (key == "metadata_format") {
      c.metadata_format = parse_corpus_format(value);
    } else if (key == "citation_input") {
      c.citation_input = value;
    } else if (key == "citation_format") {
      c.citation_format = parse_corpus_format(value);
    } else if (key == "jaccard_min") {
      c.jaccard_min = parse_value<double>(key, value);
    } else if (key == "sw_min") {
      c.sw_min = parse_value<double>(key, value);
    } else if (key == "sw_match") {
      c.scoring.match = parse_value<int>(key, value);
    } else if (key == "sw_mismatch") {
      c.scoring.mismatch = parse_value<int>(key, value);
    } else if (key == "sw_gap") {
      c.scoring.gap = parse_value<int>(key, value);
    } else if (key == "cosine_min") {
      c.cosine_min = parse_value<double>(key, value);
    } else if (key == "citation_min") {
      c.citation_min = parse_value<double>(key, value);
    } else if (key == "pagerank_damping") {
      c.damping = parse_value<double>(key, value);
    } else if (key == "pagerank_tolerance") {
      c.tolerance = parse_value<double>(key, value);
    } else if (key == "pagerank_max_iterations") {
      c.max_iterations = parse_value<int>(key, value);
    } else if (key == "band_cuts") {
      const auto v = parse_list<double>(key, value);
      if (v.size() != 4) throw ParseError("band_cuts needs four values", line_no);
      c.cuts = {v[0], v[1], v[2], v[3]};
    } else if (key == "histogram_bins") {
      c.histogram_bins = parse_value<std::size_t>(key, value);
    } else if (key == "slice_years") {
      c.slice_years = parse_list<int>(key, value);
    } else if (key == "output_dir") {
      c.output_dir = value;
    } else {
      throw ParseError("unknown key " + key, line_no);
    }
  }
  if (!schema) throw InputError("config lacks the schema line");
  return c;
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open config \"" + path.string() + "\"");
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_config(text);
}

void save_config(const fs::path& path, const PipelineConfig& cfg) {
  std::ofstream out(path, std::ios::binary);
  out << to_config_text(cfg);
  out.flush();
  if (!out) throw OutputError(path.string());
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open \"" + path.string() + "\"");
  const std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return sha256_hex(data);
}

namespace {

nlohmann::ordered_json stage_json(const StageRecord& s) {
  nlohmann::ordered_json j;
  j["name"] = s.name;
  j["inputs"] = s.inputs;
  auto& outs = j["outputs"] = nlohmann::ordered_json::array();
  for (const auto& a : s.outputs) outs.push_back({{"path", a.path}, {"sha256", a.sha256}});
  return j;
}

}  // namespace

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = kManifestSchema;
  j["complete"] = complete;
  if (!complete) {
    j["failed_stage"] = failed_stage;
    j["error"] = error;
  }
  auto& params = j["parameters"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config_entries(config)) params[k] = v;
  auto& stages_j = j["stages"] = nlohmann::ordered_json::array();
  for (const auto& s : stages) stages_j.push_back(stage_json(s));
  auto& snaps = j["snapshots"] = nlohmann::ordered_json::array();
  for (const auto& snap : snapshots) {
    nlohmann::ordered_json sj;
    sj["year"] = snap.year;
    auto& ss = sj["stages"] = nlohmann::ordered_json::array();
    for (const auto& s : snap.stages) ss.push_back(stage_json(s));
    snaps.push_back(std::move(sj));
  }
  return j.dump(2) + "\n";
}

const std::vector<std::string>& pipeline_stages() {
  static const std::vector<std::string> names{"ingest",  "link",    "build",     "threshold", "cluster",
                                              "project", "metrics", "subgraphs", "stats"};
  return names;
}

namespace {

// Reads and writes files under the output directory, recording every
// access in the current stage record.
class Workspace {
 public:
  Workspace(fs::path root, StageRecord& record) : root_(std::move(root)), record_(record) {}

  std::string read(const std::string& rel) {
    record_.inputs.push_back(rel);
    return slurp(root_ / rel);
  }

  std::string read_external(const std::string& path) {
    record_.inputs.push_back(path);
    return slurp(path);
  }

  void write(const std::string& rel, const std::string& bytes) {
    const fs::path p = root_ / rel;
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << bytes;
    out.flush();
    if (!out) throw OutputError(p.string());
    record_.outputs.push_back({rel, sha256_hex(bytes)});
  }

 private:
  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw InputError("cannot open \"" + p.string() + "\"");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  fs::path root_;
  StageRecord& record_;
};

template <typename F>
std::string render(F&& f) {
  std::ostringstream out;
  f(out);
  return std::move(out).str();
}

Graph read_graph(Workspace& ws, const std::string& rel) {
  return import_graph(std::string_view(ws.read(rel)), GraphFormat::EdgeTsv);
}

Corpus read_corpus(Workspace& ws, const std::string& rel) {
  return parse_corpus(std::string_view(ws.read(rel)), CorpusFormat::CanonicalJsonl);
}

struct Context {
  const PipelineConfig& cfg;
  Execution execution;
};

void stage_ingest(const Context& ctx, Workspace& ws) {
  const Corpus meta = parse_corpus(std::string_view(ws.read_external(ctx.cfg.metadata_input)),
                                   ctx.cfg.metadata_format, CorpusSource::Metadata);
  ws.write("ingest/metadata.jsonl", to_canonical(meta));
  if (!ctx.cfg.citation_input.empty()) {
    const Corpus cit = parse_corpus(std::string_view(ws.read_external(ctx.cfg.citation_input)),
                                    ctx.cfg.citation_format, CorpusSource::Citation);
    ws.write("ingest/citation.jsonl", to_canonical(cit));
  }
}

void stage_link(const Context& ctx, Workspace& ws) {
  const Corpus meta = read_corpus(ws, "ingest/metadata.jsonl");
  std::vector<MatchPair> matches;
  Corpus merged = meta;
  if (!ctx.cfg.citation_input.empty()) {
    const Corpus cit = read_corpus(ws, "ingest/citation.jsonl");
    LinkageOptions opt;
    opt.jaccard_min = ctx.cfg.jaccard_min;
    opt.sw_min = ctx.cfg.sw_min;
    opt.scoring = ctx.cfg.scoring;
    opt.execution = ctx.execution;
    matches = link_corpora(meta, cit, opt);
    merged = attach_references(meta, cit, matches);
  }
  ws.write("link/matches.tsv", render([&](std::ostream& o) { write_matches_tsv(o, matches); }));
  ws.write("link/corpus.jsonl", to_canonical(merged));
}

void stage_build(const Context& ctx, Workspace& ws, const std::string& corpus_rel, const std::string& prefix) {
  const Corpus corpus = read_corpus(ws, corpus_rel);
  const CouplingMatrix m = build_coupling_matrix(corpus);
  const Graph k = build_knowledge_network(m, ctx.execution);
  const Graph f = build_citation_network(corpus);
  ws.write(prefix + "build/coupling.tsv", render([&](std::ostream& o) { write_coupling_tsv(o, m); }));
  ws.write(prefix + "build/knowledge.tsv", export_graph(k, GraphFormat::EdgeTsv));
  ws.write(prefix + "build/citation.tsv", export_graph(f, GraphFormat::EdgeTsv));
}

void stage_threshold(const Context& ctx, Workspace& ws, const std::string& prefix) {
  const Graph k = read_graph(ws, prefix + "build/knowledge.tsv");
  const Graph f = read_graph(ws, prefix + "build/citation.tsv");
  const Graph kp = apply_threshold(k, Threshold::cosine_min(ctx.cfg.cosine_min));
  const Graph fp = apply_threshold(f, Threshold::citation_min_exclusive(ctx.cfg.citation_min));
  ws.write(prefix + "threshold/knowledge.tsv", export_graph(kp, GraphFormat::EdgeTsv));
  ws.write(prefix + "threshold/citation.tsv", export_graph(fp, GraphFormat::EdgeTsv));
  ws.write(prefix + "threshold/citation.graphml", export_graph(fp, GraphFormat::GraphML));
  ws.write(prefix + "threshold/summary.txt", render([&](std::ostream& o) {
             write_summary_table(o, {{"K", summarize(k)}, {"K'", summarize(kp)}, {"F", summarize(f)},
                                     {"F'", summarize(fp)}});
           }));
}

void stage_cluster(const Context&, Workspace& ws, const std::string& prefix) {
  const Graph kp = read_graph(ws, prefix + "threshold/knowledge.tsv");
  const GreedyResult r = greedy_modularity_partition(kp);
  ws.write(prefix + "cluster/partition.tsv", render([&](std::ostream& o) { write_partition_tsv(o, r.partition); }));
  ws.write(prefix + "cluster/merges.tsv", render([&](std::ostream& o) {
             o << "step\tsurvivor\tabsorbed\tdelta_q\tq\n";
             for (std::size_t i = 0; i < r.merges.size(); ++i) {
               const auto& s = r.merges[i];
               o << i + 1 << '\t' << kp.node(s.survivor).key << '\t' << kp.node(s.absorbed).key << '\t'
                 << fmt(s.delta_q) << '\t' << fmt(s.q) << '\n';
             }
             o << "# final_q\t" << fmt(r.partition.q) << '\n';
           }));
}

void stage_project(const Context& ctx, Workspace& ws, const std::string& prefix) {
  std::istringstream coupling(ws.read(prefix + "build/coupling.tsv"));
  const CouplingMatrix m = read_coupling_tsv(coupling);
  std::istringstream part(ws.read(prefix + "cluster/partition.tsv"));
  const ClusterPartition p = read_partition_tsv(part);
  Graph kp = read_graph(ws, prefix + "threshold/knowledge.tsv");
  const ClusterProjection proj = project_to_cluster_network(m, p, ctx.execution);

  for (std::size_t i = 0; i < kp.node_count(); ++i) {
    if (const auto c = p.cluster_of(kp.node(i).key)) kp.node(i).attributes["cluster"] = std::to_string(*c);
  }
  ws.write(prefix + "project/cluster_network.tsv", export_graph(proj.cluster_graph, GraphFormat::EdgeTsv));
  ws.write(prefix + "project/assignment.tsv", render([&](std::ostream& o) {
             o << "venue_key\tcluster_id\n";
             for (const auto& [v, c] : proj.assignment) o << v << '\t' << c << '\n';
           }));
  ws.write(prefix + "project/unclustered.tsv", render([&](std::ostream& o) {
             o << "venue_key\treason\tcluster_id\tcosine\n";
             for (const auto& u : proj.unclustered) {
               o << u.venue << '\t' << to_string(u.reason) << '\t'
                 << (u.cluster ? std::to_string(*u.cluster) : std::string("NA")) << '\t' << fmt(u.cosine) << '\n';
             }
           }));
  ws.write(prefix + "project/knowledge_clustered.graphml", export_graph(kp, GraphFormat::GraphML));
}

void stage_metrics(const Context& ctx, Workspace& ws, const std::string& prefix) {
  const Graph fp = read_graph(ws, prefix + "threshold/citation.tsv");
  const MetricVector bc = metrics::betweenness_centrality(
      fp, {.weighted = true, .normalized = true, .execution = ctx.execution});
  const metrics::PageRankResult pr = metrics::pagerank(fp, {.damping = ctx.cfg.damping,
                                                   .tolerance = ctx.cfg.tolerance,
                                                   .max_iterations = ctx.cfg.max_iterations,
                                                   .execution = ctx.execution});
  ws.write(prefix + "metrics/citation_betweenness.tsv", render([&](std::ostream& o) { write_metric_tsv(o, bc); }));
  ws.write(prefix + "metrics/citation_pagerank.tsv", render([&](std::ostream& o) { write_metric_tsv(o, pr.scores); }));
  nlohmann::ordered_json run;
  run["converged"] = pr.converged;
  run["iterations"] = pr.iterations;
  run["residual"] = pr.residual;
  ws.write(prefix + "metrics/pagerank_run.json", run.dump(2) + "\n");
}

void stage_subgraphs(const Context& ctx, Workspace& ws, const std::string& corpus_rel, const std::string& prefix) {
  const Corpus corpus = read_corpus(ws, corpus_rel);
  std::istringstream prs(ws.read(prefix + "metrics/citation_pagerank.tsv"));
  const auto pagerank = read_metric_tsv(prs);
  std::set<std::string> venues;
  for (const auto& r : corpus.records()) {
    if (r.venue_key) venues.insert(*r.venue_key);
  }
  ClassificationScheme scheme = ClassificationScheme::standard();
  scheme.cuts = ctx.cfg.cuts;
  const auto profiles =
      profile_venues(corpus, {venues.begin(), venues.end()}, pagerank, scheme, ctx.execution);
  ws.write(prefix + "subgraphs/profiles.tsv", render([&](std::ostream& o) { write_profiles_tsv(o, profiles); }));
}

void stage_stats(const Context& ctx, Workspace& ws, const std::string& prefix) {
  std::istringstream in(ws.read(prefix + "subgraphs/profiles.tsv"));
  const auto profiles = read_profiles_tsv(in);
  const StatReport report = profile_statistics(profiles, ctx.cfg.histogram_bins);
  ws.write(prefix + "stats/stats.tsv", render([&](std::ostream& o) { write_stats_tsv(o, report); }));
}

}  // namespace

RunManifest run_pipeline(const PipelineConfig& cfg, Execution execution) {
  cfg.validate();
  const fs::path root(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec || !fs::is_directory(root)) throw OutputError(root.string());

  RunManifest manifest;
  manifest.config = cfg;
  const Context ctx{cfg, execution};

  auto write_manifest = [&] {
    std::ofstream out(root / "manifest.json", std::ios::binary | std::ios::trunc);
    out << manifest.to_json();
    out.flush();
    if (!out) throw OutputError((root / "manifest.json").string());
  };

  auto run = [&](std::vector<StageRecord>& into, const std::string& label, const std::string& name,
                 const std::function<void(Workspace&)>& body) {
    into.push_back({name, {}, {}});
    Workspace ws(root, into.back());
    try {
      body(ws);
    } catch (const std::exception& e) {
      manifest.failed_stage = label;
      manifest.error = e.what();
      write_manifest();
      throw StageError(label, e.what(), manifest);
    }
  };

  auto analysis = [&](std::vector<StageRecord>& into, const std::string& label_prefix, const std::string& corpus_rel,
                      const std::string& prefix) {
    run(into, label_prefix + "build", "build", [&](Workspace& ws) { stage_build(ctx, ws, corpus_rel, prefix); });
    run(into, label_prefix + "threshold", "threshold", [&](Workspace& ws) { stage_threshold(ctx, ws, prefix); });
    run(into, label_prefix + "cluster", "cluster", [&](Workspace& ws) { stage_cluster(ctx, ws, prefix); });
    run(into, label_prefix + "project", "project", [&](Workspace& ws) { stage_project(ctx, ws, prefix); });
    run(into, label_prefix + "metrics", "metrics", [&](Workspace& ws) { stage_metrics(ctx, ws, prefix); });
    run(into, label_prefix + "subgraphs", "subgraphs",
        [&](Workspace& ws) { stage_subgraphs(ctx, ws, corpus_rel, prefix); });
    run(into, label_prefix + "stats", "stats", [&](Workspace& ws) { stage_stats(ctx, ws, prefix); });
  };

  run(manifest.stages, "ingest", "ingest", [&](Workspace& ws) { stage_ingest(ctx, ws); });
  run(manifest.stages, "link", "link", [&](Workspace& ws) { stage_link(ctx, ws); });
  analysis(manifest.stages, "", "link/corpus.jsonl", "");

  for (int year : cfg.slice_years) {
    manifest.snapshots.push_back({year, {}});
    auto& stages = manifest.snapshots.back().stages;
    const std::string prefix = "snapshots/" + std::to_string(year) + "/";
    const std::string label = "snapshot " + std::to_string(year) + ": ";
    run(stages, label + "slice", "slice", [&](Workspace& ws) {
      ws.write(prefix + "corpus.jsonl", to_canonical(slice_by_year(read_corpus(ws, "link/corpus.jsonl"), year)));
    });
    analysis(stages, label, prefix + "corpus.jsonl", prefix);
  }

  manifest.complete = true;
  write_manifest();
  return manifest;
}

}  // namespace venuenet
