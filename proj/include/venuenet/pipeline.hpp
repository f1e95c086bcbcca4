#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "venuenet/corpus.hpp"
#include "venuenet/error.hpp"
#include "venuenet/linkage.hpp"
#include "venuenet/parallel.hpp"
#include "venuenet/subgraphs.hpp"

namespace venuenet {

inline constexpr std::string_view kConfigSchema = "venuenet-pipeline/1";
inline constexpr std::string_view kManifestSchema = "venuenet-manifest/1";

struct PipelineConfig {
  std::string metadata_input;
  CorpusFormat metadata_format = CorpusFormat::DblpXml;
  std::string citation_input;  // empty: the metadata corpus already carries references
  CorpusFormat citation_format = CorpusFormat::CanonicalJsonl;

  double jaccard_min = 0.5;
  double sw_min = 0.9;
  AlignmentScoring scoring;

  double cosine_min = 0.1;
  double citation_min = 50.0;  // exclusive

  double damping = 0.85;
  double tolerance = 1e-8;
  int max_iterations = 200;

  BandCuts cuts;
  std::size_t histogram_bins = 20;

  std::vector<int> slice_years;  // ascending, unique
  std::string output_dir = "out";

  /// Throws InputError naming the first offending key.
  void validate() const;
  bool operator==(const PipelineConfig&) const = default;
};

/// Flat "key = value" document starting with "schema = venuenet-pipeline/1".
/// Blank lines and lines starting with '#' are ignored; unknown keys are an
/// error. Numbers are written in shortest round-trip form.
std::string to_config_text(const PipelineConfig& cfg);
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const PipelineConfig& cfg);

struct Artifact {
  std::string path;  // relative to the output directory
  std::string sha256;
  bool operator==(const Artifact&) const = default;
};

struct StageRecord {
  std::string name;
  std::vector<std::string> inputs;  // manifest paths or configured input files
  std::vector<Artifact> outputs;
  bool operator==(const StageRecord&) const = default;
};

struct SnapshotRecord {
  int year = 0;
  std::vector<StageRecord> stages;
  bool operator==(const SnapshotRecord&) const = default;
};

struct RunManifest {
  PipelineConfig config;
  std::vector<StageRecord> stages;
  std::vector<SnapshotRecord> snapshots;
  bool complete = false;
  std::string failed_stage;
  std::string error;

  std::string to_json() const;
};

/// Raised when a stage fails; carries the manifest written so far.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& cause, RunManifest partial)
      : Error("stage " + stage + " failed: " + cause), stage_(std::move(stage)), manifest_(std::move(partial)) {}
  const std::string& stage() const { return stage_; }
  const RunManifest& manifest() const { return manifest_; }

 private:
  std::string stage_;
  RunManifest manifest_;
};

/// The nine stages in execution order.
const std::vector<std::string>& pipeline_stages();

/// Runs ingest, link, build, threshold, cluster, project, metrics, subgraphs
/// and stats, each stage reading only files written by earlier stages, then
/// repeats build..stats on every configured year slice of the linked corpus
/// under snapshots/<year>/. Writes manifest.json into the output directory
/// (also on failure, with the partial record) and throws StageError.
/// Throws InputError for an invalid configuration and OutputError when the
/// output directory cannot be created.
RunManifest run_pipeline(const PipelineConfig& cfg, Execution execution = Execution::Parallel);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace venuenet
