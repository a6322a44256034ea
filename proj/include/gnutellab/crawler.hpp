#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gnutellab/graph.hpp"
#include "gnutellab/simulator.hpp"

namespace gnutellab {

enum class ContactStatus { Ok, Refused, Unreachable };

struct ContactResult {
  ContactStatus status = ContactStatus::Unreachable;
  NodeInfo info;                                         // valid when Ok
  std::vector<std::pair<NodeId, NodeInfo>> neighbors;    // from PONGs, ascending id
};

// What a crawler can observe of a network.
class CrawlNetwork {
 public:
  virtual ~CrawlNetwork() = default;
  virtual double now() const = 0;
  virtual void advance_to(double t) = 0;
  // Connects to `id` as a transient degree-1 peer, sends a PING with ttl 2
  // and collects the PONGs from the node's neighbors.
  virtual ContactResult contact(NodeId id) = 0;
  // Ground truth at the current time.
  virtual OverlayGraph truth() const = 0;
};

// Unchanging graph. A node listed in `max_connections` refuses the crawler
// once its degree reaches the limit.
class StaticNetwork : public CrawlNetwork {
 public:
  explicit StaticNetwork(OverlayGraph graph, std::map<NodeId, std::size_t> max_connections = {});

  double now() const override { return now_; }
  void advance_to(double t) override;
  ContactResult contact(NodeId id) override;
  OverlayGraph truth() const override { return graph_; }

 private:
  OverlayGraph graph_;
  std::map<NodeId, std::size_t> limits_;
  double now_ = 0.0;
};

// A running simulation; contacting a node does not perturb it.
class SimulatedNetwork : public CrawlNetwork {
 public:
  explicit SimulatedNetwork(Simulation sim) : sim_(std::move(sim)) {}

  double now() const override { return sim_.now(); }
  void advance_to(double t) override { sim_.advance_to(t); }
  ContactResult contact(NodeId id) override;
  OverlayGraph truth() const override { return sim_.live_graph(); }

  const Simulation& simulation() const noexcept { return sim_; }

 private:
  Simulation sim_;
};

struct CrawlConfig {
  std::vector<NodeId> initial_nodes;
  double connect_timeout = 20.0;  // seconds spent on a failed contact
  double listen_timeout = 30.0;   // seconds spent collecting PONGs
  double connect_latency = 1.0;   // seconds to open a successful connection
  std::size_t workers = 1;
  std::size_t invasiveness_cap = 50;
  std::size_t batch_size = 1;
};

void validate(const CrawlConfig& config);

struct CrawlSnapshot {
  double started_at = 0.0;
  double finished_at = 0.0;
  OverlayGraph graph;  // confirmed nodes and edges between them
  std::vector<NodeInfo> reported_only;  // seen in PONGs, never contacted successfully
  std::size_t contacts = 0;
  std::vector<std::string> diagnostics;

  double midpoint() const { return 0.5 * (started_at + finished_at); }
};

// Frontier crawl. A coordinator hands out each discovered node at most once;
// workers contact their batch sequentially and report back when done.
CrawlSnapshot crawl(CrawlNetwork& network, const CrawlConfig& config);

// started_at, finished_at, confirmed, reported_only
void write_crawl_meta_csv(const CrawlSnapshot& snapshot, std::ostream& out);

struct ChurnReport {
  std::vector<double> horizons_hours;
  std::vector<double> survival;  // fraction of first-snapshot nodes still seen
  std::vector<double> departed;  // 1 - survival
  double overall_reobservation = 0.0;
  double hub_reobservation = 0.0;
  double hub_ratio = 0.0;  // hub / overall; 0 when undefined
  std::size_t hub_samples = 0;
};

struct TimedGraph {
  double started_at = 0.0;
  double finished_at = 0.0;
  OverlayGraph graph;

  double midpoint() const { return 0.5 * (started_at + finished_at); }
};

TimedGraph timed(const CrawlSnapshot& s);

// Nodes are matched across snapshots by address and port. Survival at
// horizon h compares the first snapshot with the latest one whose midpoint
// is at most h hours after the first midpoint. Re-observation rates pool
// every consecutive pair; hubs have degree >= hub_threshold in the earlier
// snapshot of the pair.
ChurnReport churn_statistics(const std::vector<TimedGraph>& snapshots,
                             const std::vector<double>& horizons_hours,
                             std::size_t hub_threshold = 10);

void write_churn_csv(const ChurnReport& report, std::ostream& out);

struct FidelityReport {
  double node_recall = 0.0;
  double edge_recall = 0.0;
  double degree_distance = 0.0;  // total variation between degree distributions
};

FidelityReport snapshot_fidelity(const OverlayGraph& truth, const OverlayGraph& snapshot);

// 0.5 * sum |p(d) - q(d)| over normalized degree histograms.
double degree_total_variation(const OverlayGraph& a, const OverlayGraph& b);

}  // namespace gnutellab
