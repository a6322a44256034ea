#include "gnutellab/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <random>

namespace gnutellab {

std::vector<std::vector<NodeId>> connected_components(const OverlayGraph& graph) {
  std::vector<std::vector<NodeId>> components;
  std::vector<bool> seen(graph.id_bound(), false);
  std::vector<NodeId> queue;
  for (NodeId start : graph.nodes()) {
    if (seen[start]) continue;
    seen[start] = true;
    queue.assign(1, start);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (NodeId next : graph.neighbors(queue[head])) {
        if (!seen[next]) {
          seen[next] = true;
          queue.push_back(next);
        }
      }
    }
    std::sort(queue.begin(), queue.end());
    components.push_back(queue);
  }
  // Components were discovered in order of their smallest id, so a stable
  // sort on size alone yields the tie-break.
  std::stable_sort(components.begin(), components.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return components;
}

double largest_component_fraction(const OverlayGraph& graph) {
  if (graph.node_count() == 0) return 0.0;
  const auto components = connected_components(graph);
  return static_cast<double>(components.front().size()) / static_cast<double>(graph.node_count());
}

std::uint64_t DegreeDistribution::total() const {
  std::uint64_t sum = 0;
  for (const auto& [degree, n] : counts) sum += n;
  return sum;
}

std::uint64_t DegreeDistribution::count(std::size_t degree) const {
  auto it = counts.find(degree);
  return it == counts.end() ? 0 : it->second;
}

DegreeDistribution degree_distribution(const OverlayGraph& graph) {
  DegreeDistribution dist;
  for (NodeId id : graph.nodes()) ++dist.counts[graph.degree(id)];
  return dist;
}

double average_connections_per_node(const OverlayGraph& graph) {
  if (graph.node_count() == 0) throw InvalidArgument("connections per node of an empty graph");
  return static_cast<double>(graph.edge_count()) / static_cast<double>(graph.node_count());
}

double mean_degree(const OverlayGraph& graph) { return 2.0 * average_connections_per_node(graph); }

std::uint64_t PathLengthDistribution::reachable_pairs() const {
  std::uint64_t sum = 0;
  for (const auto& [d, n] : counts) sum += n;
  return sum;
}

std::size_t PathLengthDistribution::percentile(double q) const {
  const std::uint64_t total = reachable_pairs();
  if (total == 0) return 0;
  const double needed = q * static_cast<double>(total);
  std::uint64_t cumulative = 0;
  for (const auto& [d, n] : counts) {
    cumulative += n;
    if (static_cast<double>(cumulative) >= needed - 1e-9) return d;
  }
  return counts.rbegin()->first;
}

std::size_t PathLengthDistribution::max_distance() const {
  return counts.empty() ? 0 : counts.rbegin()->first;
}

PathMode default_path_mode(const OverlayGraph& graph, std::uint64_t seed) {
  if (graph.node_count() < kExactPathNodeLimit) return ExactPaths{};
  return SampledPaths{1000, seed};
}

std::vector<int> bfs_distances(const OverlayGraph& graph, NodeId source) {
  std::vector<int> dist(graph.id_bound(), -1);
  std::vector<NodeId> queue{source};
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    for (NodeId v : graph.neighbors(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

namespace {

// Tally distances from `source` to targets accepted by `count_target`.
template <typename Pred>
void tally_from(const OverlayGraph& graph, NodeId source, const std::vector<NodeId>& targets,
                Pred count_target, PathLengthDistribution& out) {
  const auto dist = bfs_distances(graph, source);
  for (NodeId t : targets) {
    if (t == source || !count_target(t)) continue;
    if (dist[t] < 0) {
      ++out.unreachable_pairs;
    } else {
      ++out.counts[static_cast<std::size_t>(dist[t])];
    }
  }
}

}  // namespace

PathLengthDistribution path_length_distribution(const OverlayGraph& graph, const PathMode& mode) {
  PathLengthDistribution out;
  const auto nodes = graph.nodes();
  if (std::holds_alternative<ExactPaths>(mode)) {
    for (NodeId s : nodes) {
      tally_from(graph, s, nodes, [s](NodeId t) { return t > s; }, out);
    }
    return out;
  }
  const auto& sampled = std::get<SampledPaths>(mode);
  if (sampled.sources < 1) throw InvalidArgument("sampled path mode needs at least one source");
  std::vector<NodeId> sources;
  std::mt19937_64 rng(sampled.seed);
  std::sample(nodes.begin(), nodes.end(), std::back_inserter(sources),
              std::min(sampled.sources, nodes.size()), rng);
  out.sampled = true;
  out.sample_size = sources.size();
  for (NodeId s : sources) {
    tally_from(graph, s, nodes, [](NodeId) { return true; }, out);
  }
  return out;
}

}  // namespace gnutellab
