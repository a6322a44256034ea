#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "gnutellab/analysis.hpp"
#include "gnutellab/generators.hpp"
#include "gnutellab/graph.hpp"
#include "gnutellab/graph_io.hpp"
#include "gnutellab/labels.hpp"
#include "gnutellab/metrics.hpp"
#include "gnutellab/mismatch.hpp"
#include "oracles.hpp"

using namespace gnutellab;

namespace {

OverlayGraph ring(std::size_t n) {
  OverlayGraph g;
  for (std::size_t i = 0; i < n; ++i) g.add_node();
  for (std::size_t i = 0; i < n; ++i) g.add_edge(NodeId(i), NodeId((i + 1) % n));
  return g;
}

OverlayGraph star(std::size_t leaves) {
  OverlayGraph g;
  g.add_node();
  for (std::size_t i = 0; i < leaves; ++i) g.add_edge(0, g.add_node());
  return g;
}

}  // namespace

TEST_SUITE("graph") {
  TEST_CASE("edges and nodes") {
    OverlayGraph g;
    const NodeId a = g.add_node(), b = g.add_node();
    CHECK(g.add_edge(a, b));
    CHECK(g.edge_count() == 1);
    CHECK_FALSE(g.add_edge(b, a));
    CHECK(g.edge_count() == 1);
    CHECK_THROWS_AS(g.add_edge(a, a), GraphError);
    CHECK_THROWS_AS(g.add_edge(a, 7), GraphError);
    CHECK(g.remove_edge(a, b));
    CHECK_FALSE(g.remove_edge(a, b));
  }

  TEST_CASE("removing the hub of a star") {
    OverlayGraph g = star(4);
    g.remove_node(0);
    CHECK(g.node_count() == 4);
    CHECK(g.edge_count() == 0);
    for (NodeId id : g.nodes()) CHECK(g.degree(id) == 0);
    CHECK_FALSE(g.contains(0));
    CHECK(g.id_bound() == 5);
  }

  TEST_CASE("components") {
    CHECK(connected_components(OverlayGraph{}).empty());
    CHECK(largest_component_fraction(OverlayGraph{}) == 0.0);

    OverlayGraph two;
    for (int i = 0; i < 6; ++i) two.add_node();
    two.add_edge(0, 1), two.add_edge(1, 2), two.add_edge(2, 0);
    two.add_edge(3, 4), two.add_edge(4, 5), two.add_edge(5, 3);
    auto comps = connected_components(two);
    REQUIRE(comps.size() == 2);
    CHECK(comps[0] == std::vector<NodeId>{0, 1, 2});
    CHECK(comps[1] == std::vector<NodeId>{3, 4, 5});
  }

  TEST_CASE("95 connected plus 5 isolated against union-find") {
    std::mt19937_64 rng(3);
    OverlayGraph g;
    for (int i = 0; i < 100; ++i) g.add_node();
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (NodeId i = 1; i < 95; ++i) {
      const NodeId j = NodeId(rng() % i);
      g.add_edge(i, j);
      edges.emplace_back(i, j);
    }
    for (int k = 0; k < 50; ++k) {
      const NodeId a = NodeId(rng() % 95), b = NodeId(rng() % 95);
      if (a != b && g.add_edge(a, b)) edges.emplace_back(a, b);
    }
    CHECK(oracle::largest_component(100, edges) == 95);
    CHECK(largest_component_fraction(g) == doctest::Approx(0.95));
  }

  TEST_CASE("degree distributions and averages") {
    const auto s = degree_distribution(star(4));
    CHECK(s.counts == std::map<std::size_t, std::uint64_t>{{1, 4}, {4, 1}});
    CHECK(degree_distribution(ring(9)).counts == std::map<std::size_t, std::uint64_t>{{2, 9}});

    const OverlayGraph tri = ring(3);
    CHECK(average_connections_per_node(tri) == 1.0);
    CHECK(mean_degree(tri) == 2.0);
    OverlayGraph path;
    path.add_edge(path.add_node(), path.add_node());
    CHECK(average_connections_per_node(path) == 0.5);
  }

  TEST_CASE("path lengths") {
    const auto r = path_length_distribution(ring(4), ExactPaths{});
    CHECK(r.counts == std::map<std::size_t, std::uint64_t>{{1, 4}, {2, 2}});
    CHECK(r.percentile(0.95) == 2);
    CHECK(r.max_distance() == 2);

    OverlayGraph k5;
    for (int i = 0; i < 5; ++i) k5.add_node();
    for (NodeId a = 0; a < 5; ++a)
      for (NodeId b = a + 1; b < 5; ++b) k5.add_edge(a, b);
    CHECK(path_length_distribution(k5, ExactPaths{}).counts ==
          std::map<std::size_t, std::uint64_t>{{1, 10}});
  }

  TEST_CASE("sampled paths agree with exact BFS when every node is a source") {
    const OverlayGraph g = generate_preferential_attachment(300, 2, 5);
    const auto exact = path_length_distribution(g, ExactPaths{});
    const auto sampled = path_length_distribution(g, SampledPaths{300, 1});
    CHECK(sampled.sampled);
    for (auto [d, c] : exact.counts) CHECK(sampled.counts.at(d) == 2 * c);
  }
}

TEST_SUITE("generators") {
  TEST_CASE("preferential attachment") {
    const OverlayGraph t = generate_preferential_attachment(5, 1, 1);
    CHECK(t.edge_count() == 4);
    CHECK(largest_component_fraction(t) == 1.0);
    CHECK(generate_preferential_attachment(2000, 2, 9) == generate_preferential_attachment(2000, 2, 9));
    CHECK_FALSE(generate_preferential_attachment(2000, 2, 9) == generate_preferential_attachment(2000, 2, 10));
  }

  TEST_CASE("preferential attachment tail exponent by an independent regression") {
    const OverlayGraph g = generate_preferential_attachment(10000, 2, 1);
    const auto dist = degree_distribution(g);
    const std::size_t top = contiguous_max_degree(dist, 5);
    std::vector<double> x, y;
    for (auto [d, c] : dist.counts) {
      if (d >= 5 && d <= top) {
        x.push_back(std::log10(double(d)));
        y.push_back(std::log10(double(c)));
      }
    }
    const double k = -oracle::ols_slope(x, y);
    CHECK(k >= 2.5);
    CHECK(k <= 3.5);
    CHECK(fit_power_law(dist, 5, top).exponent_k == doctest::Approx(k).epsilon(1e-9));
  }

  TEST_CASE("multimodal generator shape") {
    const OverlayGraph g = generate_multimodal(MultimodalParams{10000, 10, 2.3, 3.4, 1});
    CHECK(std::abs(average_connections_per_node(g) - 3.4) <= 0.34);
    const auto dist = degree_distribution(g);
    double mean = 0.0;
    for (std::size_t d = 2; d <= 9; ++d) mean += double(dist.count(d)) / 8.0;
    for (std::size_t d = 2; d <= 9; ++d) {
      CHECK(double(dist.count(d)) <= 2.0 * mean);
      CHECK(double(dist.count(d)) >= 0.5 * mean);
    }
    CHECK(std::abs(fit_power_law(dist, 10).exponent_k - 2.3) <= 0.3);
    CHECK(dist.total() == g.node_count());
  }

  TEST_CASE("degree histogram total at 50,000 nodes") {
    const OverlayGraph g = generate_multimodal(MultimodalParams{50000, 10, 2.3, 3.4, 2});
    CHECK(degree_distribution(g).total() == 50000);
  }
}

TEST_SUITE("labels") {
  TEST_CASE("single independent domain") {
    OverlayGraph g = generate_preferential_attachment(200, 2, 1);
    assign_labels(g, IndependentLabels{{{"only", 1.0}}, {{"AS1", 1.0}}}, 4);
    for (NodeId id : g.nodes()) CHECK(g.info(id).domain == "only");
    CHECK_THROWS_AS(assign_labels(g, IndependentLabels{{{"a", 0.5}}, {{"b", 1.0}}}, 1), InvalidArgument);
  }

  TEST_CASE("correlated labels per component") {
    OverlayGraph g;
    for (int i = 0; i < 6; ++i) g.add_node();
    g.add_edge(0, 1), g.add_edge(1, 2), g.add_edge(3, 4), g.add_edge(4, 5);
    assign_labels(g, CorrelatedLabels{1.0}, 1);
    CHECK(g.info(0).domain == g.info(1).domain);
    CHECK(g.info(1).domain == g.info(2).domain);
    CHECK(g.info(3).domain == g.info(5).domain);
    CHECK(g.info(0).domain != g.info(3).domain);
    CHECK(g.info(0).as_label != g.info(3).as_label);
  }

  TEST_CASE("top ten AS share and the independence expectation for intra-AS edges") {
    OverlayGraph g = generate_multimodal(MultimodalParams{10000, 10, 2.3, 3.4, 3});
    const LabelWeights ases = top_heavy_weights("AS", 200, 10, 0.40);
    assign_labels(g, IndependentLabels{{{"d", 1.0}}, ases}, 11);
    CHECK(std::abs(top_as_share(g, 10) - 0.40) <= 0.03);
    double sum_sq = 0.0;
    for (auto& [label, q] : ases) sum_sq += q * q;
    CHECK(std::abs(intra_as_fraction(g) - sum_sq) <= 0.01);
  }
}

TEST_SUITE("graph io") {
  TEST_CASE("round trip") {
    OverlayGraph g;
    NodeInfo info;
    info.address = "1.2.3.4";
    info.domain = "example.com";
    info.files_shared = 12;
    const NodeId a = g.add_node(info), b = g.add_node(), c = g.add_node();
    g.add_edge(a, b), g.add_edge(b, c);
    std::stringstream s;
    write_graph(g, s);
    CHECK(read_graph(s) == g);
  }

  TEST_CASE("undeclared edge endpoint names the line") {
    std::istringstream in("node 0 1.1.1.1 6346 - - 0 0\n# note\nedge 0 5\n");
    try {
      read_graph(in, "bad.graph");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
      CHECK(e.source() == "bad.graph");
    }
  }

  TEST_CASE("large snapshot file") {
    OverlayGraph g = generate_preferential_attachment(48195, 1, 2);
    const auto path = std::filesystem::temp_directory_path() / "gnutellab_48195.graph";
    save_graph(g, path);
    CHECK(load_graph(path).node_count() == 48195);
    std::filesystem::remove(path);
  }
}
