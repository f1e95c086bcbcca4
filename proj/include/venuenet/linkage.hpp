#pragma once

#include <compare>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "venuenet/corpus.hpp"
#include "venuenet/parallel.hpp"

namespace venuenet {

struct RecordRef {
  CorpusSource source;
  std::string id;
  auto operator<=>(const RecordRef&) const = default;
};

/// Records sharing one author last-name key. A record with several distinct
/// last names is a member of several canopies.
struct Canopy {
  std::string key;
  std::vector<RecordRef> members;  // sorted, unique
};

struct CanopyPartition {
  std::vector<Canopy> canopies;         // sorted by key; only keys present on both sides
  std::vector<RecordRef> unmatchable;   // records without authors
};

/// Blocks the left (metadata) and right (citation) corpora by author last
/// name. Members are tagged Metadata for the left side and Citation for the
/// right side regardless of the records' own source tags.
CanopyPartition canopy_partition(const Corpus& left, const Corpus& right);

/// Sorted, de-duplicated title tokens (see text::title_tokens).
struct TokenizedTitle {
  std::vector<std::string> tokens;
  static TokenizedTitle from(std::string_view title);
};

/// |A ∩ B| / |A ∪ B| over sorted unique token lists; 1.0 when both are empty.
double jaccard_similarity(std::span<const std::string> a, std::span<const std::string> b);
inline double jaccard_title_similarity(const TokenizedTitle& a, const TokenizedTitle& b) {
  return jaccard_similarity(a.tokens, b.tokens);
}

struct AlignmentScoring {
  int match = 2;
  int mismatch = -1;
  int gap = -1;
  bool operator==(const AlignmentScoring&) const = default;
};

/// Best local alignment score (linear gap penalty) in O(min(|a|,|b|)) space.
int smith_waterman_score(std::string_view a, std::string_view b, const AlignmentScoring& scoring = {});

/// Local alignment score divided by the best attainable score
/// match·min(|a|, |b|); 0.0 if either string is empty.
double smith_waterman_similarity(std::string_view a, std::string_view b,
                                 const AlignmentScoring& scoring = {});

struct MatchPair {
  std::string left;   // metadata record id
  std::string right;  // citation record id
  double jaccard = 0.0;
  double sw_similarity = 0.0;
  bool operator==(const MatchPair&) const = default;
};

struct LinkageOptions {
  double jaccard_min = 0.5;
  double sw_min = 0.9;
  AlignmentScoring scoring;
  Execution execution = Execution::Parallel;
};

/// Matches records of `left` against `right`: pairs co-occurring in a canopy
/// pass a Jaccard title gate, then a Smith-Waterman confirmation on the
/// normalized titles. Each left record keeps its best right record (highest
/// sw_similarity, ties to the smallest right id). Sorted by left id.
std::vector<MatchPair> link_corpora(const Corpus& left, const Corpus& right,
                                    const LinkageOptions& options = {});

/// Tab-separated left_id, right_id, jaccard, sw_similarity with a header row.
void write_matches_tsv(std::ostream& out, const std::vector<MatchPair>& matches);
std::vector<MatchPair> read_matches_tsv(std::istream& in);

/// Builds a single corpus from a linked pair: every left record keeps its
/// metadata and takes the reference list of its matched right record.
/// Reference targets naming a matched right record are rewritten to the
/// corresponding left id; other targets are kept as they are.
Corpus attach_references(const Corpus& left, const Corpus& right, const std::vector<MatchPair>& matches);

}  // namespace venuenet
