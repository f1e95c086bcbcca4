#include "venuenet/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "venuenet/error.hpp"
#include "venuenet/text.hpp"
#include "venuenet/xml.hpp"

namespace venuenet {

std::string_view to_string(GraphFormat f) {
  switch (f) {
    case GraphFormat::GraphML: return "graphml";
    case GraphFormat::EdgeTsv: return "edge-tsv";
    case GraphFormat::Json: return "json";
  }
  return "";
}

GraphFormat parse_graph_format(std::string_view s) {
  if (s == "graphml") return GraphFormat::GraphML;
  if (s == "edge-tsv" || s == "tsv") return GraphFormat::EdgeTsv;
  if (s == "json") return GraphFormat::Json;
  throw InputError("unknown graph format \"" + std::string(s) + "\"");
}

namespace {

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename T>
T parse_number(std::string_view s, std::size_t line, const char* what) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(std::string("bad ") + what + " \"" + std::string(s) + "\"", line);
  }
  return v;
}

// ---- GraphML ----------------------------------------------------------------

void write_graphml(std::ostream& out, const Graph& g) {
  std::set<std::string> attr_names;
  for (const auto& n : g.nodes()) {
    for (const auto& [k, v] : n.attributes) attr_names.insert(k);
  }
  std::map<std::string, std::string> attr_ids;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"pubs\" for=\"node\" attr.name=\"publication_count\" attr.type=\"long\"/>\n"
      << "  <key id=\"selfcit\" for=\"node\" attr.name=\"self_citations\" attr.type=\"long\"/>\n";
  std::size_t next = 0;
  for (const auto& name : attr_names) {
    const std::string id = "a" + std::to_string(next++);
    attr_ids[name] = id;
    out << "  <key id=\"" << id << "\" for=\"node\" attr.name=\"" << xml::escape(name)
        << "\" attr.type=\"string\"/>\n";
  }
  out << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
      << "  <graph id=\"G\" edgedefault=\"" << (g.directed() ? "directed" : "undirected") << "\">\n";
  for (const auto& n : g.nodes()) {
    out << "    <node id=\"" << xml::escape(n.key) << "\">"
        << "<data key=\"pubs\">" << n.publication_count << "</data>"
        << "<data key=\"selfcit\">" << n.self_citations << "</data>";
    for (const auto& [k, v] : n.attributes) {
      out << "<data key=\"" << attr_ids[k] << "\">" << xml::escape(v) << "</data>";
    }
    out << "</node>\n";
  }
  for (const auto& e : g.edges()) {
    out << "    <edge source=\"" << xml::escape(g.node(e.source).key) << "\" target=\""
        << xml::escape(g.node(e.target).key) << "\"><data key=\"weight\">" << fmt(e.weight) << "</data></edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
}

Graph read_graphml(std::string_view doc) {
  xml::Reader reader(doc);
  std::map<std::string, std::string> key_names;  // key id -> attr.name
  std::optional<Graph> g;
  std::optional<std::size_t> node;
  struct PendingEdge {
    std::string source, target;
    double weight = 1.0;
    std::size_t line = 0;
  };
  std::optional<PendingEdge> edge;
  std::string data_key;
  std::string data_text;
  bool in_data = false;
  std::size_t data_line = 0;

  auto require = [](const xml::Event& e, std::string_view attr) {
    auto v = e.attribute(attr);
    if (!v) throw ParseError("<" + e.name + "> lacks attribute " + std::string(attr), e.line, e.column);
    return *v;
  };

  for (xml::Event e = reader.next(); e.type != xml::EventType::EndOfDocument; e = reader.next()) {
    if (e.type == xml::EventType::StartElement) {
      if (e.name == "key") {
        key_names[require(e, "id")] = e.attribute("attr.name").value_or(require(e, "id"));
      } else if (e.name == "graph") {
        if (g) throw ParseError("more than one <graph>", e.line, e.column);
        const auto def = e.attribute("edgedefault").value_or("undirected");
        if (def != "directed" && def != "undirected") {
          throw ParseError("bad edgedefault \"" + def + "\"", e.line, e.column);
        }
        g.emplace(def == "directed");
      } else if (e.name == "node") {
        if (!g) throw ParseError("<node> outside <graph>", e.line, e.column);
        const std::string id = require(e, "id");
        if (g->find(id)) throw ParseError("duplicate node \"" + id + "\"", e.line, e.column);
        node = g->add_node(id);
      } else if (e.name == "edge") {
        if (!g) throw ParseError("<edge> outside <graph>", e.line, e.column);
        edge = PendingEdge{require(e, "source"), require(e, "target"), 1.0, e.line};
      } else if (e.name == "data") {
        data_key = require(e, "key");
        data_text.clear();
        in_data = true;
        data_line = e.line;
      }
    } else if (e.type == xml::EventType::Text) {
      if (in_data) data_text += e.text;
    } else if (e.type == xml::EventType::EndElement) {
      if (e.name == "data") {
        in_data = false;
        const auto it = key_names.find(data_key);
        if (it == key_names.end()) throw ParseError("undeclared data key \"" + data_key + "\"", data_line);
        const std::string& name = it->second;
        const std::string& value = data_text;
        if (edge) {
          if (name == "weight") edge->weight = parse_number<double>(text::collapse_whitespace(value), data_line, "weight");
        } else if (node) {
          Node& n = g->node(*node);
          if (name == "publication_count") {
            n.publication_count = parse_number<std::uint64_t>(text::collapse_whitespace(value), data_line, "count");
          } else if (name == "self_citations") {
            n.self_citations = parse_number<std::uint64_t>(text::collapse_whitespace(value), data_line, "count");
          } else {
            n.attributes[name] = value;
          }
        }
      } else if (e.name == "node") {
        node.reset();
      } else if (e.name == "edge") {
        const auto s = g->find(edge->source);
        const auto t = g->find(edge->target);
        if (!s || !t) throw ParseError("edge references an undeclared node", edge->line);
        g->add_edge(*s, *t, edge->weight);
        edge.reset();
      }
    }
  }
  if (!g) throw ParseError("document has no <graph> element", 1);
  return std::move(*g);
}

// ---- edge TSV ---------------------------------------------------------------

// Percent-encodes the characters that structure the format.
std::string encode(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '%' || c == '\t' || c == '\n' || c == '\r' || c == ';' || c == '=') {
      static constexpr char hex[] = "0123456789ABCDEF";
      const auto u = static_cast<unsigned char>(c);
      out += '%';
      out += hex[u >> 4];
      out += hex[u & 15];
    } else {
      out += c;
    }
  }
  return out;
}

std::string decode(std::string_view s, std::size_t line) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '%') {
      out += s[i];
      continue;
    }
    if (i + 2 >= s.size()) throw ParseError("truncated escape", line);
    unsigned v = 0;
    const auto [ptr, ec] = std::from_chars(s.data() + i + 1, s.data() + i + 3, v, 16);
    if (ec != std::errc() || ptr != s.data() + i + 3) throw ParseError("bad escape", line);
    out += static_cast<char>(v);
    i += 2;
  }
  return out;
}

constexpr std::string_view kEdgeHeader = "source\ttarget\tweight";

void write_edge_tsv(std::ostream& out, const Graph& g) {
  out << "#graph\t" << (g.directed() ? "directed" : "undirected") << '\n';
  for (const auto& n : g.nodes()) {
    out << "#node\t" << encode(n.key) << '\t' << n.publication_count << '\t' << n.self_citations << '\t';
    bool first = true;
    for (const auto& [k, v] : n.attributes) {
      if (!first) out << ';';
      first = false;
      out << encode(k) << '=' << encode(v);
    }
    out << '\n';
  }
  out << kEdgeHeader << '\n';
  for (const auto& e : g.edges()) {
    out << encode(g.node(e.source).key) << '\t' << encode(g.node(e.target).key) << '\t' << fmt(e.weight) << '\n';
  }
}

Graph read_edge_tsv(std::string_view data) {
  std::optional<Graph> g;
  std::size_t line_no = 0;
  bool edges = false;
  std::size_t pos = 0;
  while (pos < data.size()) {
    std::size_t end = data.find('\n', pos);
    if (end == std::string_view::npos) end = data.size();
    std::string_view line = data.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto c = text::split(line, '\t');
    if (!g) {
      if (c.size() != 2 || c[0] != "#graph" || (c[1] != "directed" && c[1] != "undirected")) {
        throw ParseError("expected \"#graph<TAB>directed|undirected\" header", line_no);
      }
      g.emplace(c[1] == "directed");
      continue;
    }
    if (c[0] == "#node") {
      if (edges) throw ParseError("node line after the edge header", line_no);
      if (c.size() != 5) throw ParseError("node line needs 5 columns", line_no);
      const std::string key = decode(c[1], line_no);
      if (g->find(key)) throw ParseError("duplicate node \"" + key + "\"", line_no);
      Node& n = g->node(g->add_node(key));
      n.publication_count = parse_number<std::uint64_t>(c[2], line_no, "count");
      n.self_citations = parse_number<std::uint64_t>(c[3], line_no, "count");
      if (!c[4].empty()) {
        for (std::string_view kv : text::split(c[4], ';')) {
          const auto eq = kv.find('=');
          if (eq == std::string_view::npos) throw ParseError("attribute lacks '='", line_no);
          n.attributes[decode(kv.substr(0, eq), line_no)] = decode(kv.substr(eq + 1), line_no);
        }
      }
      continue;
    }
    if (line == kEdgeHeader) {
      edges = true;
      continue;
    }
    if (!edges) throw ParseError("unexpected line before the edge header", line_no);
    if (c.size() != 3) throw ParseError("edge line needs 3 columns", line_no);
    const auto s = g->find(decode(c[0], line_no));
    const auto t = g->find(decode(c[1], line_no));
    if (!s || !t) throw ParseError("edge references an undeclared node", line_no);
    g->add_edge(*s, *t, parse_number<double>(c[2], line_no, "weight"));
  }
  if (!g) throw ParseError("empty graph file", 1);
  return std::move(*g);
}

// ---- JSON -------------------------------------------------------------------

void write_json(std::ostream& out, const Graph& g) {
  nlohmann::ordered_json j;
  j["directed"] = g.directed();
  auto& nodes = j["nodes"] = nlohmann::ordered_json::array();
  for (const auto& n : g.nodes()) {
    nlohmann::ordered_json o;
    o["key"] = n.key;
    o["publication_count"] = n.publication_count;
    o["self_citations"] = n.self_citations;
    o["attributes"] = n.attributes;
    nodes.push_back(std::move(o));
  }
  auto& edges = j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : g.edges()) {
    edges.push_back({{"source", g.node(e.source).key}, {"target", g.node(e.target).key}, {"weight", e.weight}});
  }
  out << j.dump(1) << '\n';
}

Graph read_json(std::string_view data) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(data);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), 1);
  }
  try {
    Graph g(j.at("directed").get<bool>());
    for (const auto& o : j.at("nodes")) {
      const auto key = o.at("key").get<std::string>();
      if (g.find(key)) throw InputError("duplicate node \"" + key + "\"");
      Node& n = g.node(g.add_node(key));
      n.publication_count = o.value("publication_count", std::uint64_t{0});
      n.self_citations = o.value("self_citations", std::uint64_t{0});
      if (o.contains("attributes")) n.attributes = o.at("attributes").get<std::map<std::string, std::string>>();
    }
    for (const auto& o : j.at("edges")) {
      g.add_edge(o.at("source").get<std::string>(), o.at("target").get<std::string>(), o.at("weight").get<double>());
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed graph document: ") + e.what());
  } catch (const UnknownVenueError& e) {
    throw InputError(std::string("edge references an undeclared node: ") + e.what());
  }
}

}  // namespace

void export_graph(std::ostream& out, const Graph& g, GraphFormat format) {
  switch (format) {
    case GraphFormat::GraphML: write_graphml(out, g); break;
    case GraphFormat::EdgeTsv: write_edge_tsv(out, g); break;
    case GraphFormat::Json: write_json(out, g); break;
  }
}

std::string export_graph(const Graph& g, GraphFormat format) {
  std::ostringstream out;
  export_graph(out, g, format);
  return std::move(out).str();
}

void export_graph(const std::filesystem::path& path, const Graph& g, GraphFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OutputError(path.string());
  export_graph(out, g, format);
  out.flush();
  if (!out) throw OutputError(path.string());
}

Graph import_graph(std::string_view data, GraphFormat format) {
  switch (format) {
    case GraphFormat::GraphML: return read_graphml(data);
    case GraphFormat::EdgeTsv: return read_edge_tsv(data);
    case GraphFormat::Json: return read_json(data);
  }
  throw InputError("unknown graph format");
}

Graph import_graph(std::istream& in, GraphFormat format) {
  const std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return import_graph(std::string_view(data), format);
}

Graph import_graph(const std::filesystem::path& path, GraphFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open \"" + path.string() + "\"");
  return import_graph(in, format);
}

}  // namespace venuenet
