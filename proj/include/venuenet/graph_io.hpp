#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "venuenet/graph.hpp"

namespace venuenet {

enum class GraphFormat { GraphML, EdgeTsv, Json };
std::string_view to_string(GraphFormat f);
GraphFormat parse_graph_format(std::string_view s);

/// All three formats carry directedness, node keys, publication counts,
/// self-citation counts, string node attributes and edge weights. Weights are
/// written in shortest round-trip form, so import(export(g)) == g exactly.
void export_graph(std::ostream& out, const Graph& g, GraphFormat format);
std::string export_graph(const Graph& g, GraphFormat format);
/// Throws OutputError when the file cannot be written.
void export_graph(const std::filesystem::path& path, const Graph& g, GraphFormat format);

/// Throws ParseError (or InputError for structural problems such as an edge
/// to an undeclared node).
Graph import_graph(std::string_view data, GraphFormat format);
inline Graph import_graph(const std::string& data, GraphFormat format) {
  return import_graph(std::string_view(data), format);
}
Graph import_graph(std::istream& in, GraphFormat format);
Graph import_graph(const std::filesystem::path& path, GraphFormat format);

}  // namespace venuenet
