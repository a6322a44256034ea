// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any fails. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gnutellab/analysis.hpp"
#include "gnutellab/crawler.hpp"
#include "gnutellab/generators.hpp"
#include "gnutellab/labels.hpp"
#include "gnutellab/metrics.hpp"
#include "gnutellab/mismatch.hpp"
#include "gnutellab/protocol.hpp"
#include "gnutellab/simulator.hpp"

using namespace gnutellab;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// Random connected graph: a uniform random recursive tree plus extra edges.
OverlayGraph random_connected(std::mt19937_64& rng, std::size_t n, std::size_t extra) {
  OverlayGraph g;
  for (std::size_t i = 0; i < n; ++i) g.add_node(NodeInfo{synthetic_address(NodeId(i))});
  for (NodeId i = 1; i < n; ++i) g.add_edge(i, NodeId(rng() % i));
  for (std::size_t k = 0; k < extra && n > 2; ++k) {
    const NodeId a = NodeId(rng() % n), b = NodeId(rng() % n);
    if (a != b) g.add_edge(a, b);
  }
  return g;
}

// Plain BFS, independent of the library's metrics.
std::vector<int> distances(const OverlayGraph& g, NodeId s) {
  std::vector<int> d(g.id_bound(), -1);
  std::queue<NodeId> q;
  d[s] = 0;
  q.push(s);
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop();
    for (NodeId v : g.neighbors(u))
      if (d[v] < 0) d[v] = d[u] + 1, q.push(v);
  }
  return d;
}

Outcome entropy_inequality() {
  std::mt19937_64 rng(101);
  double worst = 1.0;
  for (int labeling = 0; labeling < 1000; ++labeling) {
    const std::size_t n = 1 + rng() % 500;
    const std::size_t k = 1 + rng() % 20;
    std::vector<std::string> labels(n);
    for (auto& l : labels) l = "L" + std::to_string(rng() % k);
    const double whole = label_entropy(labels);
    for (int p = 0; p < 10; ++p) {
      const std::size_t parts = 1 + rng() % n;
      std::vector<std::vector<NodeId>> clusters(parts);
      for (NodeId i = 0; i < n; ++i) clusters[rng() % parts].push_back(i);
      ClusterPartition partition;
      for (auto& c : clusters)
        if (!c.empty()) partition.clusters.push_back(std::move(c));
      worst = std::min(worst, whole - clustering_entropy(partition, labels));
    }
  }
  return {worst >= -1e-9, "min E(C) - E(C1..Ck) = " + fmt(worst)};
}

Outcome entropy_values() {
  const double single = label_entropy(std::vector<std::string>{"a", "a", "a"});
  const double half = label_entropy(std::vector<std::string>{"a", "b"});
  const double skew = label_entropy(std::vector<std::string>{"a", "a", "a", "b"});
  // -0.75 log2 0.75 - 0.25 log2 0.25, doubled, evaluated separately.
  const bool pass = single == 0.0 && half == 2.0 && std::abs(skew - 1.62256) <= 1e-4;
  return {pass, "single " + fmt(single) + ", 0.5/0.5 " + fmt(half, 17) + ", 0.75/0.25 " + fmt(skew, 7)};
}

Outcome entropy_reduction_finding() {
  double worst_independent = 0.0, worst_correlated = 1.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    OverlayGraph g = generate_multimodal(MultimodalParams{10000, 10, 2.3, 3.4, seed});
    OverlayGraph c = g;
    assign_labels(g,
                  IndependentLabels{zipf_weights("domain", 50, 1.0), top_heavy_weights("AS", 200, 10, 0.40)},
                  seed);
    assign_labels(c, CorrelatedLabels{0.001}, seed);
    worst_independent = std::max(worst_independent, entropy_reduction(g));
    worst_correlated = std::min(worst_correlated, entropy_reduction(c));
  }
  return {worst_independent < 0.08 && worst_correlated > 0.5,
          "independent max " + fmt(worst_independent) + " (< 0.08), correlated min " + fmt(worst_correlated) +
              " (> 0.5)"};
}

Outcome link_stress_example() {
  std::uint64_t counts[2];
  for (int crossed = 0; crossed < 2; ++crossed) {
    const StressExample ex = two_site_example(crossed == 1);
    const StressReport r = link_stress(ex.overlay, ex.underlay, ex.placement, ex.source, 7);
    counts[crossed] = r.count(ex.underlay.find("D"), ex.underlay.find("E"));
  }
  return {counts[0] == 1 && counts[1] == 6,
          "D-E aligned " + std::to_string(counts[0]) + ", crossed " + std::to_string(counts[1])};
}

Outcome traffic_estimate_numbers() {
  const TrafficEstimate t = traffic_estimate(170000, 6000);
  const double tb = t.terabytes_per_month();
  return {t.aggregate_bps == 1.02e9 && tb == 330.48,
          fmt(t.aggregate_bps, 17) + " bps, " + fmt(tb, 17) + " TB/month"};
}

Outcome churn_calibration() {
  const ChurnModel m = calibrate_churn({4.0, 0.40}, {24.0, 0.75});
  const bool exact = std::abs(m.cdf(4.0) - 0.40) < 1e-6 && std::abs(m.cdf(24.0) - 0.75) < 1e-6;
  const SimConfig cfg = sim_preset("churn");
  const SessionStats s = session_statistics(run(cfg));
  const bool sim = s.observable && std::abs(s.fraction_shorter - 0.40) <= 0.03 &&
                   std::abs(s.fraction_longer - 0.25) <= 0.03;
  return {exact && sim, "shape " + fmt(m.shape) + " scale " + fmt(m.scale_hours) + "h; " +
                            std::to_string(cfg.target_population) + " nodes over " +
                            fmt(cfg.duration / 3600.0) + "h: <4h " + fmt(s.fraction_shorter) + ", >24h " +
                            fmt(s.fraction_longer) + " (" + std::to_string(s.sessions) + " sessions)"};
}

Outcome power_law_fits() {
  const PowerLawFit two = fit_power_law(DegreeDistribution{{{1, 1000}, {10, 10}}});
  DegreeDistribution inv;
  for (std::size_t L = 1; L <= 50; ++L) inv.counts[L] = std::uint64_t(std::llround(10000.0 / double(L * L)));
  const PowerLawFit rounded = fit_power_law(inv);
  DegreeDistribution mm;
  const double c = 80.0 * std::pow(10.0, 2.3);  // tail meets the flat head level near the knee
  for (std::size_t L = 1; L < 10; ++L) mm.counts[L] = 100;
  for (std::size_t L = 10; L <= 60; ++L) {
    const auto n = std::llround(c * std::pow(double(L), -2.3));
    if (n > 0) mm.counts[L] = std::uint64_t(n);
  }
  const MultiModalFit fit = fit_multimodal(mm);
  const bool pass = std::abs(two.exponent_k - 2.0) < 1e-12 && std::abs(two.r_squared - 1.0) < 1e-12 &&
                    std::abs(rounded.exponent_k - 2.0) <= 0.05 && fit.knee == 10 &&
                    std::abs(fit.tail.exponent_k - 2.3) <= 0.3;
  return {pass, "two-point k " + fmt(two.exponent_k, 8) + " r2 " + fmt(two.r_squared, 8) + "; rounded k " +
                    fmt(rounded.exponent_k) + "; knee " + std::to_string(fit.knee) + " tail k " +
                    fmt(fit.tail.exponent_k)};
}

Outcome protocol_conformance() {
  std::mt19937_64 rng(202);
  std::size_t violations = 0;
  std::string first;
  auto fail = [&](const std::string& what) {
    if (violations++ == 0) first = what;
  };
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 199;
    const OverlayGraph g = random_connected(rng, n, rng() % (n + 1));
    const NodeId source = NodeId(rng() % n);
    FloodOptions opt;
    opt.seed = rng();
    std::size_t conservation = 0;
    opt.on_transmit = [&](NodeId, NodeId, const Message& m) {
      if (is_broadcast(m.kind) && m.ttl + m.hops != 7) ++conservation;
    };
    const FloodTrace t = flood(g, source, MessageKind::Ping, 7, opt);
    if (conservation) fail("ttl+hops not conserved on trial " + std::to_string(trial));
    const auto d = distances(g, source);
    std::map<NodeId, int> replies;
    for (const auto& r : t.replies) {
      if (replies.count(r.responder)) fail("two PONGs from one node");
      replies[r.responder] = r.hops;
    }
    for (NodeId v = 0; v < n; ++v) {
      if (t.processed[v] > 1) fail("node processed an id twice");
      if (v == source) continue;
      const bool expect = d[v] <= 7;
      if (t.reached(v) != expect) fail("reach differs from BFS at node " + std::to_string(v));
      if (expect && (!replies.count(v) || replies[v] != d[v])) fail("PONG missing or off path length");
      if (!expect && replies.count(v)) fail("PONG from beyond ttl");
    }
  }
  OverlayGraph ring;
  for (int i = 0; i < 4; ++i) ring.add_node();
  ring.add_edge(0, 1), ring.add_edge(1, 2), ring.add_edge(2, 3), ring.add_edge(3, 0);
  const auto pings = flood(ring, 0, MessageKind::Ping, 7).transmission_count(MessageKind::Ping);
  if (pings != 5) fail("ring of four sent " + std::to_string(pings) + " PINGs");
  return {violations == 0, violations ? first : "100 random graphs conform; ring of four sends 5 PINGs"};
}

// The nodes a crawl can confirm: contactable nodes reachable from the seeds
// through contactable nodes.
std::set<NodeId> contactable_closure(const OverlayGraph& g, const std::map<NodeId, std::size_t>& limits,
                                     const std::vector<NodeId>& seeds) {
  auto ok = [&](NodeId v) {
    auto it = limits.find(v);
    return it == limits.end() || g.degree(v) < it->second;
  };
  std::set<NodeId> seen;
  std::vector<NodeId> stack;
  for (NodeId s : seeds)
    if (ok(s) && seen.insert(s).second) stack.push_back(s);
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (NodeId v : g.neighbors(u))
      if (ok(v) && seen.insert(v).second) stack.push_back(v);
  }
  return seen;
}

Outcome crawler_exactness() {
  std::mt19937_64 rng(303);
  std::size_t mismatches = 0, worker_diffs = 0;
  double coverage = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 999;
    const OverlayGraph g = random_connected(rng, n, rng() % (n + 1));
    std::map<NodeId, std::size_t> limits;
    for (NodeId v = 0; v < n; ++v)
      if (rng() % 40 == 0) limits[v] = 1 + rng() % 4;
    std::vector<NodeId> seeds{NodeId(rng() % n)};
    const auto confirmed = contactable_closure(g, limits, seeds);
    OverlayGraph expected = g;
    for (NodeId v = 0; v < n; ++v)
      if (!confirmed.count(v)) expected.remove_node(v);
    coverage += double(confirmed.size()) / double(n) / 100.0;

    CrawlSnapshot snaps[2];
    const std::size_t workers[2] = {1, 50};
    for (int i = 0; i < 2; ++i) {
      StaticNetwork net(g, limits);
      CrawlConfig cfg;
      cfg.initial_nodes = seeds;
      cfg.workers = workers[i];
      snaps[i] = crawl(net, cfg);
    }
    if (!(snaps[0].graph == expected)) ++mismatches;
    if (!(snaps[0].graph == snaps[1].graph) || snaps[0].reported_only != snaps[1].reported_only) ++worker_diffs;
  }
  return {mismatches == 0 && worker_diffs == 0,
          std::to_string(mismatches) + " mismatches with the oracle, " + std::to_string(worker_diffs) +
              " worker-count differences, mean contactable coverage " + fmt(coverage)};
}

Outcome snapshot_fidelity_under_churn() {
  std::ostringstream detail;
  bool pass = true;
  for (std::uint64_t seed = 1; seed <= 2; ++seed) {
    SimConfig cfg = sim_preset("crawl");
    cfg.seed = seed;
    Simulation sim(cfg);
    sim.advance_to(6 * 3600.0);
    CrawlConfig cc;
    for (NodeId id : sim.alive_nodes()) {
      if (cc.initial_nodes.size() >= 20) break;
      if (!sim.servent(id)->at_capacity()) cc.initial_nodes.push_back(id);
    }
    double dist[2];
    const std::size_t workers[2] = {50, 1};
    for (int i = 0; i < 2; ++i) {
      cc.workers = workers[i];
      SimulatedNetwork net(sim);
      const CrawlSnapshot snap = crawl(net, cc);
      Simulation truth = sim;
      truth.advance_to(snap.midpoint());
      dist[i] = snapshot_fidelity(truth.live_graph(), snap.graph).degree_distance;
    }
    pass = pass && dist[0] < 0.1 && dist[0] <= dist[1];
    detail << (seed > 1 ? "; " : "") << "seed " << seed << " fast " << fmt(dist[0]) << " slow " << fmt(dist[1]);
  }
  return {pass, detail.str()};
}

Outcome robustness_asymmetry() {
  std::size_t wins = 0;
  double worst_gap = 1.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const OverlayGraph g = generate_preferential_attachment(10000, 2, seed);
    const double targeted =
        robustness_experiment(g, RemovalStrategy::Targeted, {0.05}, seed).points[0].largest_component_fraction;
    const double random =
        robustness_experiment(g, RemovalStrategy::Random, {0.05}, seed).points[0].largest_component_fraction;
    wins += targeted < random;
    worst_gap = std::min(worst_gap, random - targeted);
  }
  return {wins == 10, std::to_string(wins) + "/10 trials targeted < random, smallest gap " + fmt(worst_gap)};
}

Outcome path_length_indication() {
  const OverlayGraph g = generate_multimodal(MultimodalParams{10000, 10, 2.3, 3.4, 1});
  const auto d = path_length_distribution(g, SampledPaths{1000, 1});
  const std::size_t p95 = d.percentile(0.95), max = d.max_distance();
  return {p95 >= 6 && p95 <= 8 && max <= 13,
          "p95 " + std::to_string(p95) + " hops, max " + std::to_string(max) + " at " +
              fmt(average_connections_per_node(g)) + " connections/node"};
}

Outcome traffic_mix() {
  const TrafficReport mid = traffic_report(run(sim_preset("mid2001")));
  const TrafficReport nov = traffic_report(run(sim_preset("nov2000")));
  const double query = mid.messages(MessageKind::Query);
  const double upkeep = nov.bytes(MessageKind::Ping) + nov.bytes(MessageKind::Pong);
  return {std::abs(query - 0.92) <= 0.05 && upkeep >= 0.50,
          "mid2001 QUERY " + fmt(query) + " of messages; nov2000 PING+PONG " + fmt(upkeep) + " of bytes"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"entropy inequality", entropy_inequality},
      {"entropy values", entropy_values},
      {"entropy reduction finding", entropy_reduction_finding},
      {"two-site link stress", link_stress_example},
      {"traffic estimate", traffic_estimate_numbers},
      {"churn calibration", churn_calibration},
      {"power-law fits", power_law_fits},
      {"protocol conformance", protocol_conformance},
      {"crawler exactness", crawler_exactness},
      {"snapshot fidelity under churn", snapshot_fidelity_under_churn},
      {"robustness asymmetry", robustness_asymmetry},
      {"path-length indication", path_length_indication},
      {"traffic mix", traffic_mix},
  };
  std::set<std::size_t> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoul(argv[i]));

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && !only.count(i + 1)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << o.detail
              << " [" << fmt(secs, 3) << "s]" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
