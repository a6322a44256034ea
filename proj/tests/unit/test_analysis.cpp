#include <doctest.h>

#include <cmath>

#include "gnutellab/analysis.hpp"
#include "gnutellab/generators.hpp"
#include "oracles.hpp"

using namespace gnutellab;

namespace {

DegreeDistribution histogram(std::map<std::size_t, std::uint64_t> counts) { return DegreeDistribution{std::move(counts)}; }

}  // namespace

TEST_SUITE("power law") {
  TEST_CASE("two points force the slope") {
    const auto f = fit_power_law(histogram({{1, 1000}, {10, 10}}));
    CHECK(f.exponent_k == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("rounded inverse square histogram") {
    std::map<std::size_t, std::uint64_t> h;
    std::vector<double> x, y;
    for (std::size_t L = 1; L <= 50; ++L) {
      h[L] = std::uint64_t(std::llround(10000.0 / double(L * L)));
      x.push_back(std::log10(double(L)));
      y.push_back(std::log10(double(h[L])));
    }
    const auto f = fit_power_law(histogram(h));
    CHECK(std::abs(f.exponent_k - 2.0) <= 0.05);
    CHECK(f.exponent_k == doctest::Approx(-oracle::ols_slope(x, y)).epsilon(1e-12));
  }

  TEST_CASE("a single degree cannot be fitted") {
    CHECK_THROWS_AS(fit_power_law(histogram({{3, 100}})), InvalidArgument);
  }
}

TEST_SUITE("multimodal") {
  TEST_CASE("flat head and 2.3 tail") {
    std::map<std::size_t, std::uint64_t> h;
    const double c = 80.0 * std::pow(10.0, 2.3);
    for (std::size_t L = 1; L <= 9; ++L) h[L] = 100;
    for (std::size_t L = 10; L <= 60; ++L) {
      const auto n = std::llround(c * std::pow(double(L), -2.3));
      if (n > 0) h[L] = std::uint64_t(n);
    }
    const auto f = fit_multimodal(histogram(h));
    CHECK(f.knee == 10);
    CHECK(std::abs(f.tail.exponent_k - 2.3) <= 0.3);
    CHECK_FALSE(f.degenerate_head);
  }

  TEST_CASE("pure power law has no flat head") {
    std::map<std::size_t, std::uint64_t> h;
    for (std::size_t L = 1; L <= 50; ++L) h[L] = std::uint64_t(std::llround(10000.0 / double(L * L)));
    const auto f = fit_multimodal(histogram(h));
    CHECK(f.degenerate_head);
    CHECK(f.knee == default_knee_candidates().front());
  }

  TEST_CASE("empty histogram") { CHECK_THROWS_AS(fit_multimodal(histogram({})), InvalidArgument); }
}

TEST_SUITE("robustness") {
  TEST_CASE("nothing removed") {
    const auto g = generate_preferential_attachment(500, 2, 1);
    const auto c = robustness_experiment(g, RemovalStrategy::Random, {0.0}, 1);
    CHECK(c.points[0].largest_component_fraction == 1.0);
  }

  TEST_CASE("hub of an eleven node star") {
    OverlayGraph g;
    g.add_node();
    for (int i = 0; i < 10; ++i) g.add_edge(0, g.add_node());
    const auto c = robustness_experiment(g, RemovalStrategy::Targeted, {0.09}, 1);
    CHECK(c.points[0].removed == 1);
    CHECK(c.points[0].largest_component_fraction == doctest::Approx(0.1));
  }

  TEST_CASE("union-find oracle on random removal") {
    const auto g = generate_preferential_attachment(2000, 2, 3);
    const auto c = robustness_experiment(g, RemovalStrategy::Targeted, {0.05}, 3);
    // Targeted removal takes the 100 highest-degree nodes, ties to smaller id.
    std::vector<NodeId> order = g.nodes();
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return g.degree(a) > g.degree(b); });
    std::vector<bool> gone(g.id_bound(), false);
    for (std::size_t i = 0; i < 100; ++i) gone[order[i]] = true;
    std::vector<std::pair<std::size_t, std::size_t>> kept;
    for (auto [a, b] : g.edges())
      if (!gone[a] && !gone[b]) kept.emplace_back(a, b);
    const std::size_t lcc = oracle::largest_component(g.id_bound(), kept);
    CHECK(c.points[0].largest_component_fraction == doctest::Approx(double(lcc) / 1900.0));
  }

  TEST_CASE("strategy names") {
    CHECK(parse_removal_strategy("targeted") == RemovalStrategy::Targeted);
    CHECK_THROWS_AS(parse_removal_strategy("x"), InvalidArgument);
  }
}

TEST_SUITE("traffic estimate") {
  TEST_CASE("headline numbers") {
    const auto t = traffic_estimate(170000, 6000);
    CHECK(t.aggregate_bps == 1.02e9);
    CHECK(t.terabytes_per_month() == doctest::Approx(330.48).epsilon(1e-12));
  }
  TEST_CASE("one connection at 8 bps") {
    const auto t = traffic_estimate(1, 8);
    CHECK(t.aggregate_bps == 8.0);
    CHECK(t.bytes_per_month == 2592000.0);
  }
  TEST_CASE("linear in connections") {
    CHECK(traffic_estimate(2 * 12345, 6000).aggregate_bps == 2 * traffic_estimate(12345, 6000).aggregate_bps);
  }
}
