#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "generators.hpp"
#include "venuenet/error.hpp"
#include "venuenet/graph_io.hpp"

using namespace venuenet;

namespace {

Graph weighted_triangle() {
  Graph g(false);
  g.add_node("a", 3);
  g.add_node("b", 1);
  g.add_node("c", 7);
  g.add_edge("a", "b", 0.5);
  g.add_edge("b", "c", 0.25);
  g.add_edge("a", "c", 1.0 / 3.0);
  return g;
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

constexpr GraphFormat kFormats[] = {GraphFormat::GraphML, GraphFormat::EdgeTsv, GraphFormat::Json};

}  // namespace

TEST_SUITE("graph_io") {
  TEST_CASE("graph basics") {
    Graph g(false);
    CHECK(g.add_node("x") == 0);
    CHECK(g.add_node("y") == 1);
    CHECK(g.add_node("x") == 0);
    g.add_edge("y", "x", 2.0);
    REQUIRE(g.edge_count() == 1);
    CHECK(g.edges()[0].source == 0);
    CHECK(g.edges()[0].target == 1);
    CHECK_THROWS_AS(g.add_edge("x", "y", 1.0), InputError);
    CHECK_THROWS_AS(g.add_edge("x", "x", 1.0), InputError);
    g.add_node("z");
    CHECK_THROWS_AS(g.add_edge("x", "z", 0.0), InputError);
    CHECK_THROWS_AS(g.index_of("nope"), UnknownVenueError);

    Graph d(true);
    d.add_node("a");
    d.add_node("b");
    d.add_edge("a", "b", 1.0);
    d.add_edge(d.index_of("b"), d.index_of("a"), 2.0);
    CHECK(d.edge_count() == 2);
    const Graph s = d.symmetrized();
    REQUIRE(s.edge_count() == 1);
    CHECK(s.edges()[0].weight == 3.0);
    CHECK(s.total_weight() == 3.0);
  }

  TEST_CASE("fingerprint ignores insertion order") {
    Graph a(false), b(false);
    a.add_node("p");
    a.add_node("q");
    a.add_edge("p", "q", 1.0);
    a.add_node("r");
    b.add_node("r");
    b.add_node("q");
    b.add_node("p");
    b.add_edge("q", "p", 1.0);
    CHECK(a.fingerprint() == b.fingerprint());
    b.node(0).attributes["cluster"] = "1";
    CHECK(a.fingerprint() != b.fingerprint());
  }

  TEST_CASE("weighted triangle as graphml") {
    const Graph g = weighted_triangle();
    const std::string xml = export_graph(g, GraphFormat::GraphML);
    CHECK(xml.find("edgedefault=\"undirected\"") != std::string::npos);
    CHECK(count(xml, "<node ") == 3);
    CHECK(count(xml, "<edge ") == 3);
    CHECK(count(xml, "<data key=\"weight\">") == 3);
    CHECK(import_graph(xml, GraphFormat::GraphML) == g);
  }

  TEST_CASE("directed two-cycle as graphml") {
    Graph g(true);
    g.add_node("a");
    g.add_node("b");
    g.add_edge("a", "b", 1.0);
    g.add_edge(1, 0, 1.0);
    const std::string xml = export_graph(g, GraphFormat::GraphML);
    CHECK(xml.find("edgedefault=\"directed\"") != std::string::npos);
    CHECK(count(xml, "<edge ") == 2);
    const Graph back = import_graph(xml, GraphFormat::GraphML);
    CHECK(back.directed());
    CHECK(back == g);
  }

  TEST_CASE("cluster attribute present on every node") {
    gen::Rng rng(2);
    Graph g = gen::random_graph(rng, 25, 0.2, false, true);
    for (std::size_t i = 0; i < g.node_count(); ++i) g.node(i).attributes["cluster"] = std::to_string(i % 4);
    const Graph back = import_graph(export_graph(g, GraphFormat::GraphML), GraphFormat::GraphML);
    REQUIRE(back.node_count() == g.node_count());
    for (const auto& n : back.nodes()) CHECK(n.attributes.count("cluster") == 1);
  }

  TEST_CASE("round trip in every format") {
    gen::Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
      Graph g = gen::random_graph(rng, 2 + trial, 0.3, trial % 2 == 0, true);
      for (std::size_t i = 0; i < g.node_count(); ++i) {
        g.node(i).publication_count = i * 3;
        g.node(i).self_citations = i % 2;
        if (i % 3 == 0) g.node(i).attributes["domain"] = "a;b=c\t%";
      }
      // awkward keys and non-terminating binary fractions
      g.add_node("weird key;=%\t", 1);
      if (g.node_count() > 2) g.add_edge(g.node_count() - 1, 0, 0.1 + 0.2);
      for (GraphFormat f : kFormats) {
        const Graph back = import_graph(export_graph(g, f), f);
        CHECK_MESSAGE(back == g, to_string(f));
        CHECK(back.fingerprint() == g.fingerprint());
      }
    }
  }

  TEST_CASE("format names and file output") {
    for (GraphFormat f : kFormats) CHECK(parse_graph_format(to_string(f)) == f);
    CHECK(parse_graph_format("tsv") == GraphFormat::EdgeTsv);
    CHECK_THROWS_AS(parse_graph_format("dot"), InputError);
    CHECK_THROWS_AS(export_graph(std::filesystem::path("/nonexistent-dir/x.graphml"), weighted_triangle(),
                                 GraphFormat::GraphML),
                    OutputError);
    const auto tmp = std::filesystem::temp_directory_path() / "venuenet_graph_io_test.json";
    export_graph(tmp, weighted_triangle(), GraphFormat::Json);
    CHECK(import_graph(tmp, GraphFormat::Json) == weighted_triangle());
    std::filesystem::remove(tmp);
  }

  TEST_CASE("structural import errors") {
    CHECK_THROWS_AS(import_graph(std::string_view("<graphml><graph edgedefault=\"undirected\"><edge source=\"a\" target=\"b\"/></graph></graphml>"),
                                 GraphFormat::GraphML),
                    InputError);
    CHECK_THROWS_AS(import_graph(std::string_view("{\"directed\":true"), GraphFormat::Json), InputError);
  }
}
