#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gnutellab/graph.hpp"

namespace gnutellab {

// Barabasi-Albert growth: an (m+1)-clique, then each new node attaches m
// edges to distinct existing nodes chosen with probability proportional to
// their current degree. Connected; m = 1 yields a tree.
OverlayGraph generate_preferential_attachment(std::size_t n, std::size_t m, std::uint64_t seed);

struct MultimodalParams {
  std::size_t n = 10000;
  std::size_t knee = 10;
  double tail_exponent = 2.3;
  double avg_connections = 3.4;  // edges per node
  std::uint64_t seed = 1;
};

// Target degree law: flat for degrees in [1, knee), c * L^-tail_exponent from
// the knee up to a cutoff where the expected count drops below one node.
// The flat level and c are solved so that the mean degree equals
// 2 * avg_connections.
struct MultimodalShape {
  double head_probability = 0.0;  // per-degree probability below the knee
  double tail_scale = 0.0;        // c
  std::size_t max_degree = 0;
};

MultimodalShape solve_multimodal_shape(const MultimodalParams& params);

// Degree sequence by quantile placement on the target law, shuffled with
// the seed; an odd stub total is evened by adding one stub to node 0.
std::vector<std::size_t> multimodal_degree_sequence(const MultimodalParams& params);

// Configuration-model pairing of the degree sequence, rejecting self-loops
// and duplicate edges. Stubs left unmatched after a few rewiring rounds are
// dropped.
OverlayGraph generate_multimodal(const MultimodalParams& params);

}  // namespace gnutellab
