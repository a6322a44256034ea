#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gnutellab/generators.hpp"
#include "gnutellab/labels.hpp"
#include "gnutellab/mismatch.hpp"
#include "oracles.hpp"

using namespace gnutellab;

namespace {

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  for (char c : s) out.emplace_back(1, c);
  return out;
}

// Hub h with `leaves` fresh neighbors plus the given shared ones.
NodeId add_hub(OverlayGraph& g, std::size_t leaves, std::vector<NodeId> shared = {}) {
  const NodeId h = g.add_node();
  for (std::size_t i = 0; i < leaves; ++i) g.add_edge(h, g.add_node());
  for (NodeId s : shared) g.add_edge(h, s);
  return h;
}

}  // namespace

TEST_SUITE("entropy") {
  TEST_CASE("reference values") {
    CHECK(label_entropy(split("aaaa")) == 0.0);
    CHECK(label_entropy(split("ab")) == 2.0);
    CHECK(std::abs(label_entropy(split("aaab")) - 1.62256) <= 1e-4);
    CHECK(label_entropy(split("aaab")) == doctest::Approx(oracle::binary_entropy_sum({{"a", 3}, {"b", 1}})));
    CHECK_THROWS_AS(make_label_distribution({{"a", 0.5}}, 2), InvalidArgument);
  }

  TEST_CASE("clustering entropy") {
    const auto labels = split("aaaabbbb");
    CHECK(clustering_entropy(ClusterPartition{{{0, 1, 2, 3, 4, 5, 6, 7}}, {}}, labels) ==
          doctest::Approx(label_entropy(labels)));
    CHECK(clustering_entropy(ClusterPartition{{{0}, {1}, {2}, {3}, {4}, {5}, {6}, {7}}, {}}, labels) == 0.0);
    CHECK(clustering_entropy(ClusterPartition{{{0, 1, 2, 3}, {4, 5, 6, 7}}, {}}, labels) == 0.0);
    CHECK(clustering_entropy(ClusterPartition{{{0, 1, 4, 5}, {2, 3, 6, 7}}, {}}, labels) == doctest::Approx(2.0));
  }
}

TEST_SUITE("clusters") {
  TEST_CASE("two disjoint stars") {
    OverlayGraph g;
    const NodeId h1 = add_hub(g, 4);
    const NodeId h2 = add_hub(g, 4);
    g.add_node();  // isolated
    const auto p = build_clusters(g, 4);
    validate_partition(p, g);
    REQUIRE(p.clusters.size() == 3);
    CHECK(p.clusters[0].front() == h1);
    CHECK(p.clusters[1].front() == h2);
    REQUIRE(p.residual_index);
    CHECK(p.clusters[*p.residual_index] == std::vector<NodeId>{10});
  }

  TEST_CASE("overlap of exactly a quarter is not merged") {
    // h1 {a,b,c}, h2 {c,d,e}: clusters of 4 sharing only c.
    OverlayGraph g;
    const NodeId h1 = g.add_node();
    const NodeId a = g.add_node(), b = g.add_node(), c = g.add_node();
    const NodeId h2 = g.add_node();
    const NodeId d = g.add_node(), e = g.add_node();
    for (NodeId x : {a, b, c}) g.add_edge(h1, x);
    for (NodeId x : {c, d, e}) g.add_edge(h2, x);
    const auto p = build_clusters(g, 3);
    validate_partition(p, g);
    REQUIRE(p.clusters.size() == 2);
    // Equal sizes: c stays with the cluster whose smallest member is h1.
    CHECK(p.clusters[0] == std::vector<NodeId>{h1, a, b, c});
    CHECK(p.clusters[1] == std::vector<NodeId>{h2, d, e});
  }

  TEST_CASE("half overlap is merged") {
    OverlayGraph g;
    const NodeId h1 = g.add_node();
    const NodeId a = g.add_node(), b = g.add_node(), c = g.add_node();
    const NodeId h2 = g.add_node();
    const NodeId d = g.add_node();
    for (NodeId x : {a, b, c}) g.add_edge(h1, x);
    for (NodeId x : {b, c, d}) g.add_edge(h2, x);
    const auto p = build_clusters(g, 3);
    REQUIRE(p.clusters.size() == 1);
    CHECK(p.clusters[0].size() == 6);
    CHECK_FALSE(p.residual_index);
  }

  TEST_CASE("entropy reduction edge cases") {
    OverlayGraph g = generate_preferential_attachment(500, 2, 1);
    assign_labels(g, IndependentLabels{{{"x", 1.0}}, {{"AS1", 1.0}}}, 1);
    CHECK(entropy_reduction(g) == 0.0);
    CHECK(intra_as_fraction(g) == 1.0);
    CHECK(top_as_share(g) == 1.0);
  }

  TEST_CASE("correlated labels give a large reduction") {
    OverlayGraph g = generate_multimodal(MultimodalParams{3000, 10, 2.3, 3.4, 4});
    assign_labels(g, CorrelatedLabels{0.001}, 4);
    CHECK(entropy_reduction(g) > 0.5);
  }

  TEST_CASE("bipartite across two ASs") {
    OverlayGraph g;
    for (int i = 0; i < 6; ++i) g.add_node(NodeInfo{"", 6346, "", i < 3 ? "AS1" : "AS2"});
    for (NodeId a = 0; a < 3; ++a)
      for (NodeId b = 3; b < 6; ++b) g.add_edge(a, b);
    CHECK(intra_as_fraction(g) == 0.0);
  }
}

TEST_SUITE("link stress") {
  TEST_CASE("two site example") {
    const auto aligned = two_site_example(false);
    const auto crossed = two_site_example(true);
    const std::size_t D = aligned.underlay.find("D"), E = aligned.underlay.find("E");
    const auto ra = link_stress(aligned.overlay, aligned.underlay, aligned.placement, aligned.source, 7);
    const auto rc = link_stress(crossed.overlay, crossed.underlay, crossed.placement, crossed.source, 7);
    CHECK(ra.count(D, E) == 1);
    CHECK(rc.count(D, E) == 6);
    for (auto [link, n] : ra.counts) CHECK(n == 1);
  }

  TEST_CASE("routes are deterministic and symmetric") {
    UnderlayGraph u;
    for (const char* n : {"A", "B", "C", "D"}) u.add_node(n);
    u.add_link("A", "B"), u.add_link("A", "C"), u.add_link("B", "D"), u.add_link("C", "D");
    CHECK(u.route(0, 3) == std::vector<std::size_t>{0, 1, 3});
    CHECK(u.route(3, 0) == std::vector<std::size_t>{3, 1, 0});
  }

  TEST_CASE("stress csv") {
    const auto ex = two_site_example(true);
    std::ostringstream out;
    write_stress_csv(link_stress(ex.overlay, ex.underlay, ex.placement, ex.source, 7), ex.underlay, out);
    CHECK(out.str().find("D-E,6\n") != std::string::npos);
  }
}
