#include "gnutellab/labels.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gnutellab/metrics.hpp"

namespace gnutellab {
namespace {

std::discrete_distribution<std::size_t> make_sampler(const LabelWeights& weights,
                                                     const char* what) {
  if (weights.empty()) throw InvalidArgument(std::string("empty ") + what + " distribution");
  double sum = 0.0;
  std::vector<double> w;
  w.reserve(weights.size());
  for (const auto& [label, p] : weights) {
    if (!(p >= 0.0)) throw InvalidArgument(std::string("negative weight in ") + what + " distribution");
    sum += p;
    w.push_back(p);
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw InvalidArgument(std::string(what) + " distribution sums to " + std::to_string(sum));
  }
  return std::discrete_distribution<std::size_t>(w.begin(), w.end());
}

void assign_independent(OverlayGraph& graph, const IndependentLabels& scheme, std::uint64_t seed) {
  auto domain_sampler = make_sampler(scheme.domains, "domain");
  auto as_sampler = make_sampler(scheme.ases, "AS");
  std::mt19937_64 rng(seed);
  for (NodeId id : graph.nodes()) {
    NodeInfo& info = graph.info(id);
    info.domain = scheme.domains[domain_sampler(rng)].first;
    info.as_label = scheme.ases[as_sampler(rng)].first;
  }
}

void assign_correlated(OverlayGraph& graph, const CorrelatedLabels& scheme) {
  if (!(scheme.locality > 0.0 && scheme.locality <= 1.0)) {
    throw InvalidArgument("locality must be in (0, 1]");
  }
  constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);
  std::vector<std::size_t> territory(graph.id_bound(), kUnassigned);
  std::size_t next_label = 0;
  std::vector<NodeId> layer;
  std::vector<NodeId> next_layer;
  for (auto component : connected_components(graph)) {
    const auto target = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(scheme.locality * static_cast<double>(component.size()))));
    std::stable_sort(component.begin(), component.end(), [&](NodeId a, NodeId b) {
      return graph.degree(a) > graph.degree(b);
    });
    for (NodeId seed_node : component) {
      if (territory[seed_node] != kUnassigned) continue;
      const std::size_t label = next_label++;
      territory[seed_node] = label;
      std::size_t size = 1;
      layer.assign(1, seed_node);
      while (!layer.empty() && size < target) {
        next_layer.clear();
        for (NodeId u : layer) {
          for (NodeId v : graph.neighbors(u)) {
            if (territory[v] == kUnassigned) {
              territory[v] = label;
              ++size;
              next_layer.push_back(v);
            }
          }
        }
        layer.swap(next_layer);
      }
    }
  }
  for (NodeId id : graph.nodes()) {
    NodeInfo& info = graph.info(id);
    info.domain = scheme.domain_prefix + std::to_string(territory[id]);
    info.as_label = scheme.as_prefix + std::to_string(territory[id]);
  }
}

}  // namespace

LabelWeights top_heavy_weights(const std::string& prefix, std::size_t count, std::size_t top_k,
                               double top_mass) {
  if (count == 0 || top_k == 0 || top_k > count) throw InvalidArgument("invalid top-heavy shape");
  if (!(top_mass > 0.0 && top_mass <= 1.0)) throw InvalidArgument("top mass must be in (0, 1]");
  if (top_k == count && top_mass != 1.0) throw InvalidArgument("top mass must be 1 when top_k == count");
  LabelWeights out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double p = i < top_k ? top_mass / static_cast<double>(top_k)
                               : (1.0 - top_mass) / static_cast<double>(count - top_k);
    out.emplace_back(prefix + std::to_string(i), p);
  }
  return out;
}

LabelWeights zipf_weights(const std::string& prefix, std::size_t count, double exponent) {
  if (count == 0) throw InvalidArgument("zipf distribution needs at least one label");
  LabelWeights out;
  double sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double w = std::pow(static_cast<double>(i + 1), -exponent);
    out.emplace_back(prefix + std::to_string(i), w);
    sum += w;
  }
  for (auto& [label, p] : out) p /= sum;
  return out;
}

void assign_labels(OverlayGraph& graph, const LabelScheme& scheme, std::uint64_t seed) {
  if (const auto* independent = std::get_if<IndependentLabels>(&scheme)) {
    assign_independent(graph, *independent, seed);
  } else {
    assign_correlated(graph, std::get<CorrelatedLabels>(scheme));
  }
}

}  // namespace gnutellab
