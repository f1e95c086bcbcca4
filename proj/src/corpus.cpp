#include "venuenet/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <iterator>
#include <set>
#include <sstream>

#include <json.hpp>

#include "venuenet/error.hpp"
#include "venuenet/text.hpp"
#include "venuenet/xml.hpp"

namespace venuenet {

using json = nlohmann::ordered_json;

std::string_view to_string(CorpusSource s) {
  return s == CorpusSource::Metadata ? "metadata" : "citation";
}

std::string_view to_string(VenueKind k) { return k == VenueKind::Journal ? "journal" : "conference"; }

CorpusSource parse_source(std::string_view s) {
  if (s == "metadata") return CorpusSource::Metadata;
  if (s == "citation") return CorpusSource::Citation;
  throw InputError("unknown corpus source \"" + std::string(s) + "\"");
}

VenueKind parse_venue_kind(std::string_view s) {
  if (s == "journal") return VenueKind::Journal;
  if (s == "conference") return VenueKind::Conference;
  throw InputError("unknown venue kind \"" + std::string(s) + "\"");
}

CorpusFormat parse_corpus_format(std::string_view s) {
  if (s == "jsonl" || s == "canonical-jsonl") return CorpusFormat::CanonicalJsonl;
  if (s == "dblp-xml" || s == "dblp-xml-subset") return CorpusFormat::DblpXml;
  throw InputError("unknown corpus format \"" + std::string(s) + "\"");
}

std::string_view to_string(CorpusFormat f) {
  return f == CorpusFormat::CanonicalJsonl ? "jsonl" : "dblp-xml";
}

AuthorName AuthorName::from(std::string_view full_name) {
  AuthorName a{std::string(full_name), text::last_name_key(full_name)};
  if (a.last_name_key.empty()) throw InputError("empty author name");
  return a;
}

void Corpus::add(PublicationRecord record) {
  if (record.id.empty()) throw InputError("record with empty id");
  if (record.year && (*record.year < kMinYear || *record.year > kMaxYear)) {
    throw InputError("record \"" + record.id + "\": year " + std::to_string(*record.year) +
                     " outside [" + std::to_string(kMinYear) + ", " + std::to_string(kMaxYear) + "]");
  }
  for (const auto& a : record.authors) {
    if (a.last_name_key.empty()) throw InputError("record \"" + record.id + "\": empty author name");
  }
  const auto [it, inserted] = index_.emplace(record.id, records_.size());
  if (!inserted) throw DuplicateIdError(record.id);
  records_.push_back(std::move(record));
}

void Corpus::add_venue(std::string key, VenueInfo info) { venues_[std::move(key)] = std::move(info); }

const PublicationRecord* Corpus::find(std::string_view id) const {
  const auto i = index_of(id);
  return i ? &records_[*i] : nullptr;
}

std::optional<std::size_t> Corpus::index_of(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const VenueInfo* Corpus::venue(std::string_view key) const {
  const auto it = venues_.find(std::string(key));
  return it == venues_.end() ? nullptr : &it->second;
}

namespace {

// Converts record-level invariant violations into positioned parse errors.
template <typename Fn>
void at_position(std::size_t line, std::size_t column, Fn&& fn) {
  try {
    fn();
  } catch (const DuplicateIdError&) {
    throw;
  } catch (const ParseError&) {
    throw;
  } catch (const InputError& e) {
    throw ParseError(e.what(), line, column);
  }
}

const json& require(const json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing field \"") + key + "\"", line);
  return *it;
}

std::string require_string(const json& v, const char* what, std::size_t line) {
  if (!v.is_string()) throw ParseError(std::string("field \"") + what + "\" must be a string", line);
  return v.get<std::string>();
}

void parse_jsonl_line(Corpus& corpus, const std::string& line_text, std::size_t line,
                      CorpusSource default_source) {
  json obj;
  try {
    obj = json::parse(line_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), line);
  }
  if (!obj.is_object()) throw ParseError("expected a JSON object", line);

  std::string type = "record";
  if (const auto it = obj.find("type"); it != obj.end()) type = require_string(*it, "type", line);

  if (type == "venue") {
    std::string key = require_string(require(obj, "key", line), "key", line);
    if (key.empty()) throw ParseError("venue with empty key", line);
    VenueInfo info;
    if (const auto it = obj.find("name"); it != obj.end()) info.name = require_string(*it, "name", line);
    if (const auto it = obj.find("kind"); it != obj.end()) {
      at_position(line, 0, [&] { info.kind = parse_venue_kind(require_string(*it, "kind", line)); });
    }
    corpus.add_venue(std::move(key), std::move(info));
    return;
  }
  if (type != "record") throw ParseError("unknown line type \"" + type + "\"", line);

  PublicationRecord r;
  r.id = require_string(require(obj, "id", line), "id", line);
  r.source = default_source;
  if (const auto it = obj.find("source"); it != obj.end()) {
    at_position(line, 0, [&] { r.source = parse_source(require_string(*it, "source", line)); });
  }
  r.title = require_string(require(obj, "title", line), "title", line);
  if (const auto it = obj.find("authors"); it != obj.end()) {
    if (!it->is_array()) throw ParseError("field \"authors\" must be an array", line);
    for (const auto& a : *it) {
      const std::string name = require_string(a, "authors[]", line);
      at_position(line, 0, [&] { r.authors.push_back(AuthorName::from(name)); });
    }
  }
  if (const auto it = obj.find("venue"); it != obj.end() && !it->is_null()) {
    r.venue_key = require_string(*it, "venue", line);
  }
  if (const auto it = obj.find("year"); it != obj.end() && !it->is_null()) {
    if (!it->is_number_integer()) throw ParseError("field \"year\" must be an integer", line);
    r.year = it->get<int>();
  }
  if (const auto it = obj.find("refs"); it != obj.end()) {
    if (!it->is_array()) throw ParseError("field \"refs\" must be an array", line);
    for (const auto& ref : *it) {
      if (ref.is_string()) {
        r.references.push_back(ReferenceEntry::to_record(ref.get<std::string>()));
      } else if (ref.is_object() && ref.contains("raw")) {
        r.references.push_back(ReferenceEntry::raw(require_string(ref["raw"], "refs[].raw", line)));
      } else {
        throw ParseError("reference must be a record id string or {\"raw\": ...}", line);
      }
    }
  }
  at_position(line, 0, [&] { corpus.add(std::move(r)); });
}

Corpus parse_jsonl(std::istream& in, CorpusSource default_source) {
  Corpus corpus;
  std::string line_text;
  std::size_t line = 0;
  while (std::getline(in, line_text)) {
    ++line;
    if (!line_text.empty() && line_text.back() == '\r') line_text.pop_back();
    if (line_text.find_first_not_of(" \t") == std::string::npos) continue;
    parse_jsonl_line(corpus, line_text, line, default_source);
  }
  return corpus;
}

// Collects all character data below the current element, including nested
// inline markup such as <i> or <sub> in titles.
std::string read_element_text(xml::Reader& reader) {
  std::string out;
  int depth = 1;
  while (depth > 0) {
    xml::Event e = reader.next();
    switch (e.type) {
      case xml::EventType::StartElement: ++depth; break;
      case xml::EventType::EndElement: --depth; break;
      case xml::EventType::Text: out += e.text; break;
      case xml::EventType::EndOfDocument: return out;
    }
  }
  return out;
}

void skip_element(xml::Reader& reader) { read_element_text(reader); }

// "journals/tcs/Ley95" -> "journals/tcs"
std::string venue_from_dblp_key(std::string_view key) {
  const auto first = key.find('/');
  if (first == std::string_view::npos) return std::string(key);
  const auto second = key.find('/', first + 1);
  return std::string(second == std::string_view::npos ? key : key.substr(0, second));
}

Corpus parse_dblp(std::string_view document, CorpusSource default_source) {
  Corpus corpus;
  xml::Reader reader(document);
  int depth = 0;
  while (true) {
    xml::Event e = reader.next();
    if (e.type == xml::EventType::EndOfDocument) break;
    if (e.type == xml::EventType::EndElement) {
      --depth;
      continue;
    }
    if (e.type != xml::EventType::StartElement) continue;
    if (depth == 0) {  // root element (<dblp>)
      ++depth;
      continue;
    }
    if (e.name != "article" && e.name != "inproceedings") {
      skip_element(reader);
      continue;
    }
    const std::size_t line = e.line;
    const std::size_t column = e.column;
    const auto key = e.attribute("key");
    if (!key || key->empty()) throw ParseError("<" + e.name + "> without key attribute", line, column);

    PublicationRecord r;
    r.id = *key;
    r.source = default_source;
    std::string venue_key = e.attribute("venue").value_or(venue_from_dblp_key(*key));
    VenueKind kind = e.name == "article" ? VenueKind::Journal : VenueKind::Conference;
    if (key->starts_with("journals/")) kind = VenueKind::Journal;
    if (key->starts_with("conf/")) kind = VenueKind::Conference;
    std::string venue_name;
    bool has_title = false;

    while (true) {
      xml::Event child = reader.next();
      if (child.type == xml::EventType::EndElement) break;
      if (child.type != xml::EventType::StartElement) continue;
      const std::string value = read_element_text(reader);
      at_position(child.line, child.column, [&] {
        if (child.name == "author") {
          r.authors.push_back(AuthorName::from(value));
        } else if (child.name == "title") {
          r.title = value;
          has_title = true;
        } else if (child.name == "year") {
          int year = 0;
          const std::string trimmed = text::collapse_whitespace(value);
          const auto [ptr, ec] = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), year);
          if (ec != std::errc() || ptr != trimmed.data() + trimmed.size()) {
            throw InputError("bad <year> value \"" + value + "\"");
          }
          r.year = year;
        } else if (child.name == "journal" || child.name == "booktitle") {
          if (venue_name.empty()) venue_name = text::collapse_whitespace(value);
        } else if (child.name == "cite") {
          const std::string target = text::collapse_whitespace(value);
          if (!target.empty() && target != "...") r.references.push_back(ReferenceEntry::to_record(target));
        }
      });
    }
    if (!has_title) throw ParseError("<" + e.name + " key=\"" + *key + "\"> without <title>", line, column);
    r.venue_key = venue_key;
    at_position(line, column, [&] { corpus.add(std::move(r)); });
    if (!corpus.venue(venue_key)) {
      corpus.add_venue(venue_key, VenueInfo{venue_name.empty() ? venue_key : venue_name, kind});
    }
  }
  return corpus;
}

}  // namespace

Corpus parse_corpus(std::istream& in, CorpusFormat format, CorpusSource default_source) {
  if (format == CorpusFormat::CanonicalJsonl) return parse_jsonl(in, default_source);
  const std::string document{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_dblp(document, default_source);
}

Corpus parse_corpus(std::string_view text, CorpusFormat format, CorpusSource default_source) {
  if (format == CorpusFormat::DblpXml) return parse_dblp(text, default_source);
  std::istringstream in{std::string(text)};
  return parse_jsonl(in, default_source);
}

void write_canonical(std::ostream& out, const Corpus& corpus) {
  for (const auto& [key, info] : corpus.venues()) {
    json v;
    v["type"] = "venue";
    v["key"] = key;
    v["name"] = info.name;
    v["kind"] = to_string(info.kind);
    out << v.dump() << '\n';
  }
  for (const auto& r : corpus.records()) {
    json j;
    j["id"] = r.id;
    j["source"] = to_string(r.source);
    j["title"] = r.title;
    j["authors"] = json::array();
    for (const auto& a : r.authors) j["authors"].push_back(a.full_name);
    j["venue"] = r.venue_key ? json(*r.venue_key) : json(nullptr);
    j["year"] = r.year ? json(*r.year) : json(nullptr);
    j["refs"] = json::array();
    for (const auto& ref : r.references) {
      if (ref.resolved) {
        j["refs"].push_back(ref.target);
      } else {
        j["refs"].push_back(json{{"raw", ref.target}});
      }
    }
    out << j.dump() << '\n';
  }
}

std::string to_canonical(const Corpus& corpus) {
  std::ostringstream out;
  write_canonical(out, corpus);
  return out.str();
}

ValidationReport validate_corpus(const Corpus& corpus) {
  ValidationReport report;
  std::set<std::string> dangling;
  for (const auto& r : corpus.records()) {
    if (r.venue_key) {
      if (!corpus.venue(*r.venue_key)) dangling.insert(*r.venue_key);
    } else {
      report.records_without_venue.push_back(r.id);
    }
    if (text::collapse_whitespace(r.title).empty()) report.empty_title_records.push_back(r.id);
    if (r.authors.empty()) report.records_without_authors.push_back(r.id);
    for (const auto& ref : r.references) {
      if (ref.resolved && corpus.find(ref.target)) {
        ++report.resolved_references;
      } else {
        ++report.unresolved_references;
      }
    }
  }
  report.dangling_venue_keys.assign(dangling.begin(), dangling.end());
  return report;
}

Corpus slice_by_year(const Corpus& corpus, int cutoff) {
  if (cutoff < kMinYear || cutoff > kMaxYear) {
    throw InputError("slice year " + std::to_string(cutoff) + " outside [" + std::to_string(kMinYear) +
                     ", " + std::to_string(kMaxYear) + "]");
  }
  Corpus out;
  std::set<std::string> used;
  for (const auto& r : corpus.records()) {
    if (!r.year || *r.year > cutoff) continue;
    if (r.venue_key) used.insert(*r.venue_key);
    out.add(r);
  }
  for (const auto& [key, info] : corpus.venues()) {
    if (used.contains(key)) out.add_venue(key, info);
  }
  return out;
}

}  // namespace venuenet
