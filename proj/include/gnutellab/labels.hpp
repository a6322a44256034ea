#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gnutellab/graph.hpp"

namespace gnutellab {

// Label -> probability. Must be non-empty and sum to 1.
using LabelWeights = std::vector<std::pair<std::string, double>>;

// `count` labels "<prefix><i>"; the first `top_k` share `top_mass` equally and
// the rest share the remainder equally.
LabelWeights top_heavy_weights(const std::string& prefix, std::size_t count, std::size_t top_k,
                               double top_mass);

// Zipf law p_i proportional to 1 / i^exponent over `count` labels.
LabelWeights zipf_weights(const std::string& prefix, std::size_t count, double exponent);

// Domain and AS drawn i.i.d. per node, unrelated to the topology.
struct IndependentLabels {
  LabelWeights domains;
  LabelWeights ases;
};

// One domain and one AS per territory. Within each component, territories
// are seeded at the highest-degree unassigned node and grown breadth-first a
// whole layer at a time until they hold ceil(locality * component size)
// nodes. locality = 1 labels each component uniformly.
struct CorrelatedLabels {
  double locality = 1.0;
  std::string domain_prefix = "region";
  std::string as_prefix = "AS";
};

using LabelScheme = std::variant<IndependentLabels, CorrelatedLabels>;

void assign_labels(OverlayGraph& graph, const LabelScheme& scheme, std::uint64_t seed);

}  // namespace gnutellab
