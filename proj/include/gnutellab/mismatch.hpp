#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "gnutellab/graph.hpp"

namespace gnutellab {

struct LabelDistribution {
  std::map<std::string, double> probs;  // label -> p_i
  std::size_t population = 0;           // |C|

  std::size_t support_size() const { return probs.size(); }
};

// Checks 0 < p_i <= 1 and a total of 1 within 1e-9.
LabelDistribution make_label_distribution(std::map<std::string, double> probs,
                                          std::size_t population);
// Empirical distribution of a multiset of labels.
LabelDistribution label_distribution(const std::vector<std::string>& labels);

// Sum over labels of the binary entropy of p_i, in bits.
double label_entropy(const LabelDistribution& dist);
double label_entropy(const std::vector<std::string>& labels);

enum class LabelField { Domain, As };
const std::string& node_label(const OverlayGraph& graph, NodeId id, LabelField field);

struct ClusterPartition {
  std::vector<std::vector<NodeId>> clusters;  // each sorted ascending
  std::optional<std::size_t> residual_index;  // cluster of nodes near no hub
};

// Throws InvalidArgument unless the clusters are non-empty, disjoint and
// cover exactly the graph's nodes.
void validate_partition(const ClusterPartition& partition, const OverlayGraph& graph);

// Size-weighted mean of the per-cluster label entropies. `labels` is
// indexed by NodeId.
double clustering_entropy(const ClusterPartition& partition, const std::vector<std::string>& labels);
double clustering_entropy(const ClusterPartition& partition, const OverlayGraph& graph,
                          LabelField field = LabelField::Domain);

// One cluster per hub (degree >= hub_threshold): the hub and its neighbors.
// Clusters sharing more than merge_overlap of the smaller one are merged
// until no pair qualifies, scanning clusters by smallest member id. A node
// left in several clusters stays in the largest (ties: the cluster with the
// smallest member id). Nodes in no cluster form a final residual cluster.
ClusterPartition build_clusters(const OverlayGraph& graph, std::size_t hub_threshold = 10,
                                double merge_overlap = 0.25);

// (E(C) - E(C_1..C_k)) / E(C) over the hub clustering; 0 when E(C) = 0.
double entropy_reduction(const OverlayGraph& graph, std::size_t hub_threshold = 10,
                         LabelField field = LabelField::Domain);

// Fraction of edges whose endpoints share an AS label.
double intra_as_fraction(const OverlayGraph& graph);
// Fraction of nodes in the k most populous ASs.
double top_as_share(const OverlayGraph& graph, std::size_t k = 10);

void write_clusters_csv(const ClusterPartition& partition, std::ostream& out);

// Physical network with deterministic shortest-path routing.
class UnderlayGraph {
 public:
  std::size_t add_node(std::string name);
  void add_link(std::size_t a, std::size_t b);
  void add_link(const std::string& a, const std::string& b);

  std::size_t node_count() const { return names_.size(); }
  std::size_t link_count() const;
  const std::string& name(std::size_t i) const { return names_.at(i); }
  std::size_t find(const std::string& name) const;
  const std::vector<std::size_t>& neighbors(std::size_t i) const { return adj_.at(i); }
  std::vector<std::pair<std::size_t, std::size_t>> links() const;
  bool connected() const;

  // Node sequence of a shortest path. For a < b it is the lexicographically
  // smallest one; route(b, a) is route(a, b) reversed.
  std::vector<std::size_t> route(std::size_t a, std::size_t b) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<std::size_t>> adj_;  // sorted
};

// Injective overlay node -> underlay node map.
struct HostPlacement {
  std::map<NodeId, std::size_t> host;

  void validate(const OverlayGraph& overlay, const UnderlayGraph& underlay) const;
};

struct StressReport {
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> counts;  // every physical link
  std::pair<std::size_t, std::size_t> max_link{0, 0};
  std::uint64_t max_count = 0;
  std::uint64_t total = 0;

  std::uint64_t count(std::size_t a, std::size_t b) const;
};

// Floods a PING from `source` and charges every broadcast transmission u->v
// to each physical link on the route between the hosts of u and v.
StressReport link_stress(const OverlayGraph& overlay, const UnderlayGraph& underlay,
                         const HostPlacement& placement, NodeId source, int initial_ttl);

void write_stress_csv(const StressReport& report, const UnderlayGraph& underlay, std::ostream& out);

// Eight hosts A..H in two sites {A,B,C,D} and {E,F,G,H} joined only by the
// physical link D-E. The aligned overlay mirrors the physical tree; the
// crossed one is a tree whose edges cross between the sites six times.
struct StressExample {
  OverlayGraph overlay;
  UnderlayGraph underlay;
  HostPlacement placement;
  NodeId source = 0;
};

StressExample two_site_example(bool crossed);

}  // namespace gnutellab
