#include "gnutellab/mismatch.hpp"

#include <algorithm>
#include <cmath>
#include <string_view>
#include <unordered_map>

#include "gnutellab/csv.hpp"

namespace gnutellab {
namespace {

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

template <typename Labels>
double entropy_of(const Labels& labels) {
  std::unordered_map<std::string_view, std::size_t> counts;
  std::size_t n = 0;
  for (const std::string& l : labels) {
    ++counts[l];
    ++n;
  }
  double e = 0.0;
  for (const auto& [label, c] : counts) e += binary_entropy(static_cast<double>(c) / static_cast<double>(n));
  return e;
}

}  // namespace

LabelDistribution make_label_distribution(std::map<std::string, double> probs,
                                          std::size_t population) {
  if (probs.empty()) throw InvalidArgument("label distribution is empty");
  double sum = 0.0;
  for (const auto& [label, p] : probs) {
    if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("probability of '" + label + "' not in (0, 1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw InvalidArgument("label probabilities sum to " + format_real(sum));
  return LabelDistribution{std::move(probs), population};
}

LabelDistribution label_distribution(const std::vector<std::string>& labels) {
  if (labels.empty()) throw InvalidArgument("no labels");
  std::map<std::string, std::size_t> counts;
  for (const auto& l : labels) ++counts[l];
  LabelDistribution d;
  d.population = labels.size();
  for (const auto& [l, c] : counts) d.probs[l] = static_cast<double>(c) / static_cast<double>(labels.size());
  return d;
}

double label_entropy(const LabelDistribution& dist) {
  double e = 0.0;
  for (const auto& [label, p] : dist.probs) e += binary_entropy(p);
  return e;
}

double label_entropy(const std::vector<std::string>& labels) {
  if (labels.empty()) return 0.0;
  return entropy_of(labels);
}

const std::string& node_label(const OverlayGraph& graph, NodeId id, LabelField field) {
  const NodeInfo& info = graph.info(id);
  return field == LabelField::Domain ? info.domain : info.as_label;
}

void validate_partition(const ClusterPartition& partition, const OverlayGraph& graph) {
  std::vector<char> seen(graph.id_bound(), 0);
  std::size_t covered = 0;
  for (std::size_t i = 0; i < partition.clusters.size(); ++i) {
    const auto& c = partition.clusters[i];
    if (c.empty()) throw InvalidArgument("cluster " + std::to_string(i) + " is empty");
    for (NodeId v : c) {
      if (!graph.contains(v)) throw InvalidArgument("cluster member " + std::to_string(v) + " not in graph");
      if (seen[v]++) throw InvalidArgument("node " + std::to_string(v) + " in two clusters");
      ++covered;
    }
  }
  if (covered != graph.node_count()) throw InvalidArgument("partition does not cover every node");
}

double clustering_entropy(const ClusterPartition& partition, const std::vector<std::string>& labels) {
  std::size_t total = 0;
  for (const auto& c : partition.clusters) total += c.size();
  if (total == 0) return 0.0;
  double e = 0.0;
  for (const auto& c : partition.clusters) {
    if (c.empty()) continue;
    std::unordered_map<std::string_view, std::size_t> counts;
    for (NodeId v : c) {
      if (v >= labels.size()) {
        throw InvalidArgument("node " + std::to_string(v) + " has no label");
      }
      ++counts[labels[v]];
    }
    double ec = 0.0;
    for (const auto& [label, n] : counts) {
      ec += binary_entropy(static_cast<double>(n) / static_cast<double>(c.size()));
    }
    e += static_cast<double>(c.size()) / static_cast<double>(total) * ec;
  }
  return e;
}

namespace {

std::vector<std::string> labels_by_id(const OverlayGraph& graph, LabelField field) {
  std::vector<std::string> labels(graph.id_bound());
  for (NodeId id : graph.nodes()) labels[id] = node_label(graph, id, field);
  return labels;
}

}  // namespace

double clustering_entropy(const ClusterPartition& partition, const OverlayGraph& graph,
                          LabelField field) {
  validate_partition(partition, graph);
  return clustering_entropy(partition, labels_by_id(graph, field));
}

ClusterPartition build_clusters(const OverlayGraph& graph, std::size_t hub_threshold,
                                double merge_overlap) {
  if (hub_threshold < 1) throw InvalidArgument("hub threshold must be at least 1");
  if (!(merge_overlap >= 0.0 && merge_overlap < 1.0)) {
    throw InvalidArgument("merge overlap must lie in [0, 1)");
  }
  std::vector<std::vector<NodeId>> members;
  std::vector<std::vector<std::size_t>> containing(graph.id_bound());
  for (NodeId hub : graph.nodes()) {
    if (graph.degree(hub) < hub_threshold) continue;
    auto adj = graph.neighbors(hub);
    std::vector<NodeId> c(adj.begin(), adj.end());
    c.insert(std::lower_bound(c.begin(), c.end(), hub), hub);
    for (NodeId v : c) containing[v].push_back(members.size());
    members.push_back(std::move(c));
  }
  std::vector<char> active(members.size(), 1);

  std::vector<std::size_t> shared(members.size(), 0);
  std::vector<std::size_t> touched;
  auto merge_partner = [&](std::size_t i) -> std::optional<std::size_t> {
    touched.clear();
    for (NodeId v : members[i]) {
      for (std::size_t j : containing[v]) {
        if (j == i || !active[j]) continue;
        if (shared[j]++ == 0) touched.push_back(j);
      }
    }
    std::optional<std::size_t> best;
    for (std::size_t j : touched) {
      const double smaller = static_cast<double>(std::min(members[i].size(), members[j].size()));
      if (static_cast<double>(shared[j]) > merge_overlap * smaller &&
          (!best || members[j].front() < members[*best].front())) {
        best = j;
      }
      shared[j] = 0;
    }
    return best;
  };

  for (bool changed = true; changed;) {
    changed = false;
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (active[i]) order.push_back(i);
    }
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return members[a].front() < members[b].front(); });
    for (std::size_t i : order) {
      if (!active[i]) continue;
      while (auto j = merge_partner(i)) {
        std::vector<NodeId> merged;
        std::set_union(members[i].begin(), members[i].end(), members[*j].begin(), members[*j].end(),
                       std::back_inserter(merged));
        for (NodeId v : members[*j]) {
          auto& list = containing[v];
          list.erase(std::find(list.begin(), list.end(), *j));
          if (std::find(list.begin(), list.end(), i) == list.end()) list.push_back(i);
        }
        members[i] = std::move(merged);
        members[*j].clear();
        active[*j] = 0;
        changed = true;
      }
    }
  }

  // Overlapping members go to the largest cluster holding them.
  std::vector<std::vector<NodeId>> final_members(members.size());
  std::vector<NodeId> residual;
  for (NodeId v : graph.nodes()) {
    std::optional<std::size_t> home;
    for (std::size_t j : containing[v]) {
      if (!active[j]) continue;
      if (!home || members[j].size() > members[*home].size() ||
          (members[j].size() == members[*home].size() && members[j].front() < members[*home].front())) {
        home = j;
      }
    }
    if (home) {
      final_members[*home].push_back(v);
    } else {
      residual.push_back(v);
    }
  }
  ClusterPartition out;
  for (auto& c : final_members) {
    if (!c.empty()) out.clusters.push_back(std::move(c));
  }
  std::sort(out.clusters.begin(), out.clusters.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  if (!residual.empty()) {
    out.residual_index = out.clusters.size();
    out.clusters.push_back(std::move(residual));
  }
  return out;
}

double entropy_reduction(const OverlayGraph& graph, std::size_t hub_threshold, LabelField field) {
  const auto labels = labels_by_id(graph, field);
  std::vector<std::string> all;
  all.reserve(graph.node_count());
  for (NodeId id : graph.nodes()) all.push_back(labels[id]);
  const double whole = label_entropy(all);
  if (whole <= 0.0) return 0.0;
  const double clustered = clustering_entropy(build_clusters(graph, hub_threshold), labels);
  return (whole - clustered) / whole;
}

double intra_as_fraction(const OverlayGraph& graph) {
  if (graph.edge_count() == 0) throw InvalidArgument("intra-AS fraction undefined without edges");
  std::size_t same = 0;
  for (const auto& [a, b] : graph.edges()) same += graph.info(a).as_label == graph.info(b).as_label;
  return static_cast<double>(same) / static_cast<double>(graph.edge_count());
}

double top_as_share(const OverlayGraph& graph, std::size_t k) {
  if (graph.node_count() == 0) throw InvalidArgument("AS share of an empty graph");
  std::unordered_map<std::string, std::size_t> counts;
  for (NodeId id : graph.nodes()) ++counts[graph.info(id).as_label];
  std::vector<std::size_t> sizes;
  for (const auto& [as, c] : counts) sizes.push_back(c);
  std::sort(sizes.rbegin(), sizes.rend());
  std::size_t top = 0;
  for (std::size_t i = 0; i < std::min(k, sizes.size()); ++i) top += sizes[i];
  return static_cast<double>(top) / static_cast<double>(graph.node_count());
}

void write_clusters_csv(const ClusterPartition& partition, std::ostream& out) {
  CsvWriter csv(out);
  csv.cells("node", "cluster", "residual");
  std::vector<std::pair<NodeId, std::size_t>> rows;
  for (std::size_t i = 0; i < partition.clusters.size(); ++i) {
    for (NodeId v : partition.clusters[i]) rows.emplace_back(v, i);
  }
  std::sort(rows.begin(), rows.end());
  for (const auto& [v, i] : rows) csv.cells(v, i, int(partition.residual_index == i));
}

}  // namespace gnutellab
