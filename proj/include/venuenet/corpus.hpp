#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace venuenet {

/// Which library a record came from: bibliographic metadata (venues,
/// authors) or the citation index (reference lists).
enum class CorpusSource { Metadata, Citation };

enum class VenueKind { Journal, Conference };

std::string_view to_string(CorpusSource s);
std::string_view to_string(VenueKind k);
CorpusSource parse_source(std::string_view s);
VenueKind parse_venue_kind(std::string_view s);

struct AuthorName {
  std::string full_name;
  std::string last_name_key;

  /// Throws InputError for a blank name.
  static AuthorName from(std::string_view full_name);
  bool operator==(const AuthorName&) const = default;
};

/// A reference is either the id of a known record (which need not be part
/// of the same corpus) or a raw citation string that could not be resolved.
struct ReferenceEntry {
  std::string target;
  bool resolved = true;

  static ReferenceEntry to_record(std::string id) { return {std::move(id), true}; }
  static ReferenceEntry raw(std::string citation) { return {std::move(citation), false}; }
  bool operator==(const ReferenceEntry&) const = default;
};

inline constexpr int kMinYear = 1900;
inline constexpr int kMaxYear = 2100;

struct PublicationRecord {
  std::string id;
  CorpusSource source = CorpusSource::Metadata;
  std::string title;
  std::vector<AuthorName> authors;
  std::optional<std::string> venue_key;
  std::optional<int> year;
  std::vector<ReferenceEntry> references;

  bool operator==(const PublicationRecord&) const = default;
};

struct VenueInfo {
  std::string name;
  VenueKind kind = VenueKind::Conference;
  bool operator==(const VenueInfo&) const = default;
};

/// An ordered, id-indexed collection of publication records plus the venue
/// table. Once built it is only read, so it can be shared between threads.
class Corpus {
 public:
  /// Appends a record. Throws DuplicateIdError if the id is already present
  /// and InputError if a record invariant is violated.
  void add(PublicationRecord record);
  /// Inserts or replaces a venue table entry.
  void add_venue(std::string key, VenueInfo info);

  const std::vector<PublicationRecord>& records() const { return records_; }
  const std::map<std::string, VenueInfo>& venues() const { return venues_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  const PublicationRecord* find(std::string_view id) const;
  std::optional<std::size_t> index_of(std::string_view id) const;
  const VenueInfo* venue(std::string_view key) const;

  bool operator==(const Corpus& other) const {
    return records_ == other.records_ && venues_ == other.venues_;
  }

 private:
  std::vector<PublicationRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
  std::map<std::string, VenueInfo> venues_;
};

enum class CorpusFormat { CanonicalJsonl, DblpXml };

CorpusFormat parse_corpus_format(std::string_view s);
std::string_view to_string(CorpusFormat f);

/// Parses a corpus stream. `default_source` tags records that do not carry
/// an explicit source. Throws ParseError (with line and, for XML, column)
/// for malformed entries and DuplicateIdError for repeated ids.
Corpus parse_corpus(std::istream& in, CorpusFormat format,
                    CorpusSource default_source = CorpusSource::Metadata);
Corpus parse_corpus(std::string_view text, CorpusFormat format,
                    CorpusSource default_source = CorpusSource::Metadata);

/// Writes the canonical line-delimited format: venue lines sorted by key,
/// then one record per line in corpus order.
void write_canonical(std::ostream& out, const Corpus& corpus);
std::string to_canonical(const Corpus& corpus);

struct ValidationReport {
  std::vector<std::string> dangling_venue_keys;  // sorted, unique
  std::vector<std::string> empty_title_records;
  std::vector<std::string> records_without_venue;
  std::vector<std::string> records_without_authors;
  std::size_t unresolved_references = 0;  // raw strings and ids outside the corpus
  std::size_t resolved_references = 0;

  bool clean() const {
    return dangling_venue_keys.empty() && empty_title_records.empty();
  }
};

ValidationReport validate_corpus(const Corpus& corpus);

/// Records published in or before `cutoff`; records without a year are
/// dropped and the venue table keeps only venues still referenced.
/// Throws InputError when the cutoff is outside [kMinYear, kMaxYear].
Corpus slice_by_year(const Corpus& corpus, int cutoff);

}  // namespace venuenet
