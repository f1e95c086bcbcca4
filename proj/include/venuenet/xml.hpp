#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace venuenet::xml {

struct Attribute {
  std::string name;
  std::string value;
};

enum class EventType { StartElement, EndElement, Text, EndOfDocument };

struct Event {
  EventType type = EventType::EndOfDocument;
  std::string name;                   // element name for start/end events
  std::vector<Attribute> attributes;  // start events only
  std::string text;                   // decoded character data for text events
  std::size_t line = 0;
  std::size_t column = 0;

  std::optional<std::string> attribute(std::string_view key) const;
};

/// Pull parser for the XML subset used by bibliography exports and GraphML:
/// elements, attributes, character data, CDATA, comments, processing
/// instructions and a skipped DOCTYPE. Predefined, numeric and the HTML
/// Latin-1 named entities are decoded to UTF-8. Namespaces are not
/// interpreted; prefixed names are reported verbatim.
class Reader {
 public:
  explicit Reader(std::string_view document) : doc_(document) {}

  /// Throws ParseError on malformed markup or mismatched tags.
  Event next();

 private:
  char peek(std::size_t ahead = 0) const;
  void advance(std::size_t n = 1);
  bool starts_with(std::string_view s) const;
  void skip_until(std::string_view terminator, const char* what);
  void skip_space();
  std::string read_name();
  std::string decode_entity();
  [[noreturn]] void fail(const std::string& msg) const;

  std::string_view doc_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
  std::vector<std::string> open_;
  std::optional<Event> pending_end_;
};

/// Escapes the five XML special characters.
std::string escape(std::string_view s);

}  // namespace venuenet::xml
