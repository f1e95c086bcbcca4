#include "venuenet/xml.hpp"

#include <array>
#include <charconv>
#include <cstdint>

#include "venuenet/error.hpp"

namespace venuenet::xml {
namespace {

// HTML 4 Latin-1 entity names, code points U+00A0..U+00FF in order.
constexpr std::array<std::string_view, 96> kLatin1Entities{
    "nbsp",   "iexcl",  "cent",   "pound",  "curren", "yen",    "brvbar", "sect",   "uml",
    "copy",   "ordf",   "laquo",  "not",    "shy",    "reg",    "macr",   "deg",    "plusmn",
    "sup2",   "sup3",   "acute",  "micro",  "para",   "middot", "cedil",  "sup1",   "ordm",
    "raquo",  "frac14", "frac12", "frac34", "iquest", "Agrave", "Aacute", "Acirc",  "Atilde",
    "Auml",   "Aring",  "AElig",  "Ccedil", "Egrave", "Eacute", "Ecirc",  "Euml",   "Igrave",
    "Iacute", "Icirc",  "Iuml",   "ETH",    "Ntilde", "Ograve", "Oacute", "Ocirc",  "Otilde",
    "Ouml",   "times",  "Oslash", "Ugrave", "Uacute", "Ucirc",  "Uuml",   "Yacute", "THORN",
    "szlig",  "agrave", "aacute", "acirc",  "atilde", "auml",   "aring",  "aelig",  "ccedil",
    "egrave", "eacute", "ecirc",  "euml",   "igrave", "iacute", "icirc",  "iuml",   "eth",
    "ntilde", "ograve", "oacute", "ocirc",  "otilde", "ouml",   "divide", "oslash", "ugrave",
    "uacute", "ucirc",  "uuml",   "yacute", "thorn",  "yuml",
};

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_name_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '-' || c == '.' || c == ':' || static_cast<unsigned char>(c) >= 0x80;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

}  // namespace

std::optional<std::string> Event::attribute(std::string_view key) const {
  for (const auto& a : attributes) {
    if (a.name == key) return a.value;
  }
  return std::nullopt;
}

char Reader::peek(std::size_t ahead) const {
  return pos_ + ahead < doc_.size() ? doc_[pos_ + ahead] : '\0';
}

void Reader::advance(std::size_t n) {
  for (std::size_t i = 0; i < n && pos_ < doc_.size(); ++i) {
    if (doc_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }
}

bool Reader::starts_with(std::string_view s) const { return doc_.substr(pos_).starts_with(s); }

void Reader::skip_until(std::string_view terminator, const char* what) {
  while (pos_ < doc_.size() && !starts_with(terminator)) advance();
  if (pos_ >= doc_.size()) fail(std::string("unterminated ") + what);
  advance(terminator.size());
}

void Reader::skip_space() {
  while (pos_ < doc_.size() && is_space(doc_[pos_])) advance();
}

std::string Reader::read_name() {
  const std::size_t start = pos_;
  while (pos_ < doc_.size() && is_name_char(doc_[pos_])) advance();
  if (pos_ == start) fail("expected a name");
  return std::string(doc_.substr(start, pos_ - start));
}

void Reader::fail(const std::string& msg) const { throw ParseError(msg, line_, column_); }

std::string Reader::decode_entity() {
  advance();  // '&'
  const std::size_t start = pos_;
  while (pos_ < doc_.size() && doc_[pos_] != ';' && pos_ - start < 16) advance();
  if (peek() != ';') fail("unterminated entity reference");
  const std::string_view name = doc_.substr(start, pos_ - start);
  advance();
  std::string out;
  if (name == "amp") return "&";
  if (name == "lt") return "<";
  if (name == "gt") return ">";
  if (name == "quot") return "\"";
  if (name == "apos") return "'";
  if (name.starts_with("#")) {
    const bool hex = name.size() > 1 && (name[1] == 'x' || name[1] == 'X');
    const std::string_view digits = name.substr(hex ? 2 : 1);
    std::uint32_t cp = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty() || cp > 0x10FFFF) {
      fail("bad character reference &" + std::string(name) + ";");
    }
    append_utf8(out, cp);
    return out;
  }
  for (std::size_t i = 0; i < kLatin1Entities.size(); ++i) {
    if (kLatin1Entities[i] == name) {
      append_utf8(out, static_cast<char32_t>(0xA0 + i));
      return out;
    }
  }
  fail("unknown entity &" + std::string(name) + ";");
}

Event Reader::next() {
  if (pending_end_) {
    Event e = std::move(*pending_end_);
    pending_end_.reset();
    return e;
  }
  while (true) {
    if (pos_ >= doc_.size()) {
      if (!open_.empty()) fail("unexpected end of document inside <" + open_.back() + ">");
      return Event{};
    }
    const std::size_t line = line_;
    const std::size_t column = column_;
    if (peek() != '<') {
      Event e;
      e.type = EventType::Text;
      e.line = line;
      e.column = column;
      while (pos_ < doc_.size() && peek() != '<') {
        if (peek() == '&') {
          e.text += decode_entity();
        } else {
          e.text.push_back(peek());
          advance();
        }
      }
      if (open_.empty()) {
        for (char c : e.text) {
          if (!is_space(c)) fail("character data outside the root element");
        }
        continue;
      }
      return e;
    }
    if (starts_with("<!--")) {
      skip_until("-->", "comment");
      continue;
    }
    if (starts_with("<?")) {
      skip_until("?>", "processing instruction");
      continue;
    }
    if (starts_with("<![CDATA[")) {
      advance(9);
      const std::size_t start = pos_;
      skip_until("]]>", "CDATA section");
      Event e;
      e.type = EventType::Text;
      e.text = std::string(doc_.substr(start, pos_ - start - 3));
      e.line = line;
      e.column = column;
      return e;
    }
    if (starts_with("<!DOCTYPE")) {
      int depth = 0;
      while (pos_ < doc_.size()) {
        const char c = peek();
        if (c == '[') ++depth;
        if (c == ']') --depth;
        advance();
        if (c == '>' && depth == 0) break;
      }
      continue;
    }
    if (starts_with("</")) {
      advance(2);
      Event e;
      e.type = EventType::EndElement;
      e.line = line;
      e.column = column;
      e.name = read_name();
      skip_space();
      if (peek() != '>') fail("expected '>' after </" + e.name);
      advance();
      if (open_.empty() || open_.back() != e.name) {
        fail("mismatched closing tag </" + e.name + ">" +
             (open_.empty() ? std::string() : " (open element is <" + open_.back() + ">)"));
      }
      open_.pop_back();
      return e;
    }
    advance();  // '<'
    Event e;
    e.type = EventType::StartElement;
    e.line = line;
    e.column = column;
    e.name = read_name();
    while (true) {
      skip_space();
      if (peek() == '/' && peek(1) == '>') {
        advance(2);
        Event end;
        end.type = EventType::EndElement;
        end.name = e.name;
        end.line = line;
        end.column = column;
        pending_end_ = std::move(end);
        return e;
      }
      if (peek() == '>') {
        advance();
        open_.push_back(e.name);
        return e;
      }
      if (pos_ >= doc_.size()) fail("unterminated start tag <" + e.name);
      Attribute a;
      a.name = read_name();
      skip_space();
      if (peek() != '=') fail("expected '=' after attribute " + a.name);
      advance();
      skip_space();
      const char quote = peek();
      if (quote != '"' && quote != '\'') fail("expected quoted value for attribute " + a.name);
      advance();
      while (pos_ < doc_.size() && peek() != quote) {
        if (peek() == '&') {
          a.value += decode_entity();
        } else if (peek() == '<') {
          fail("'<' inside attribute value");
        } else {
          a.value.push_back(peek());
          advance();
        }
      }
      if (pos_ >= doc_.size()) fail("unterminated attribute value");
      advance();
      e.attributes.push_back(std::move(a));
    }
  }
}

std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace venuenet::xml
