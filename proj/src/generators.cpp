#include "gnutellab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gnutellab {
namespace {

OverlayGraph empty_graph(std::size_t n) {
  OverlayGraph g;
  for (std::size_t i = 0; i < n; ++i) {
    const auto id = static_cast<NodeId>(i);
    NodeInfo info;
    info.address = synthetic_address(id);
    g.add_node(std::move(info));
  }
  return g;
}

struct ShapeSolution {
  double head = 0.0;
  double tail = 0.0;
};

// Solve head*(knee-1) + tail*S0 = 1 and head*sum(1..knee-1) + tail*S1 = mu.
ShapeSolution solve_linear(std::size_t knee, double gamma, std::size_t max_degree, double mu) {
  double s0 = 0.0;
  double s1 = 0.0;
  for (std::size_t L = knee; L <= max_degree; ++L) {
    const double p = std::pow(static_cast<double>(L), -gamma);
    s0 += p;
    s1 += p * static_cast<double>(L);
  }
  const double head_count = static_cast<double>(knee - 1);
  const double head_sum = head_count * static_cast<double>(knee) / 2.0;
  const double det = head_count * s1 - head_sum * s0;
  return {(s1 - mu * s0) / det, (head_count * mu - head_sum) / det};
}

}  // namespace

OverlayGraph generate_preferential_attachment(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 1 || n <= m) throw InvalidArgument("preferential attachment needs n > m >= 1");
  OverlayGraph g = empty_graph(n);
  std::mt19937_64 rng(seed);
  // Every edge endpoint, so a uniform pick is a degree-proportional pick.
  std::vector<NodeId> endpoints;
  endpoints.reserve(2 * n * m);
  const auto seed_size = static_cast<NodeId>(m + 1);
  for (NodeId a = 0; a < seed_size; ++a) {
    for (NodeId b = a + 1; b < seed_size; ++b) {
      g.add_edge(a, b);
      endpoints.push_back(a);
      endpoints.push_back(b);
    }
  }
  std::vector<NodeId> targets;
  for (auto v = seed_size; v < n; ++v) {
    targets.clear();
    std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
    while (targets.size() < m) {
      const NodeId t = endpoints[pick(rng)];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (NodeId t : targets) {
      g.add_edge(v, t);
      endpoints.push_back(v);
      endpoints.push_back(t);
    }
  }
  return g;
}

MultimodalShape solve_multimodal_shape(const MultimodalParams& p) {
  if (p.knee < 2) throw InvalidArgument("multimodal knee must be >= 2");
  if (!(p.tail_exponent > 1.0)) throw InvalidArgument("multimodal tail exponent must be > 1");
  if (p.n <= p.knee) throw InvalidArgument("multimodal generator needs n > knee");
  if (!(p.avg_connections > 0.0)) throw InvalidArgument("avg_connections must be positive");

  const double mu = 2.0 * p.avg_connections;
  std::size_t max_degree = p.n - 1;
  ShapeSolution sol;
  // Fixed point: the cutoff is where n * c * L^-gamma falls below one node,
  // and c depends on the cutoff.
  for (int iter = 0; iter < 50; ++iter) {
    sol = solve_linear(p.knee, p.tail_exponent, max_degree, mu);
    if (!(sol.head > 0.0) || !(sol.tail > 0.0)) break;
    const double cutoff = std::pow(static_cast<double>(p.n) * sol.tail, 1.0 / p.tail_exponent);
    auto next = static_cast<std::size_t>(std::floor(cutoff));
    next = std::clamp<std::size_t>(next, p.knee, p.n - 1);
    if (next == max_degree) break;
    max_degree = next;
  }
  if (!(sol.head > 0.0) || !(sol.tail > 0.0)) {
    throw InvalidArgument("avg_connections " + std::to_string(p.avg_connections) +
                          " is not achievable with knee " + std::to_string(p.knee) +
                          " and tail exponent " + std::to_string(p.tail_exponent));
  }
  return {sol.head, sol.tail, max_degree};
}

std::vector<std::size_t> multimodal_degree_sequence(const MultimodalParams& p) {
  const MultimodalShape shape = solve_multimodal_shape(p);
  std::vector<double> cdf(shape.max_degree + 1, 0.0);
  for (std::size_t L = 1; L <= shape.max_degree; ++L) {
    const double prob = L < p.knee ? shape.head_probability
                                   : shape.tail_scale * std::pow(static_cast<double>(L), -p.tail_exponent);
    cdf[L] = cdf[L - 1] + prob;
  }
  for (double& c : cdf) c /= cdf.back();

  std::vector<std::size_t> degrees(p.n);
  for (std::size_t i = 0; i < p.n; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(p.n);
    auto it = std::lower_bound(cdf.begin() + 1, cdf.end(), u);
    degrees[i] = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
        it - cdf.begin(), static_cast<std::ptrdiff_t>(shape.max_degree)));
  }
  std::mt19937_64 rng(p.seed);
  std::shuffle(degrees.begin(), degrees.end(), rng);
  std::size_t stubs = 0;
  for (auto d : degrees) stubs += d;
  if (stubs % 2 == 1) ++degrees[0];
  return degrees;
}

OverlayGraph generate_multimodal(const MultimodalParams& p) {
  const auto degrees = multimodal_degree_sequence(p);
  OverlayGraph g = empty_graph(p.n);
  std::vector<NodeId> stubs;
  for (std::size_t v = 0; v < degrees.size(); ++v) {
    stubs.insert(stubs.end(), degrees[v], static_cast<NodeId>(v));
  }
  // Separate stream from the degree shuffle so the pairing is independent.
  std::mt19937_64 rng(p.seed ^ 0x9E3779B97F4A7C15ULL);
  std::vector<NodeId> leftover;
  constexpr int kRounds = 20;
  for (int round = 0; round < kRounds && stubs.size() >= 2; ++round) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    leftover.clear();
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      const NodeId a = stubs[i];
      const NodeId b = stubs[i + 1];
      if (a == b || !g.add_edge(a, b)) {
        leftover.push_back(a);
        leftover.push_back(b);
      }
    }
    if (stubs.size() % 2 == 1) leftover.push_back(stubs.back());
    if (leftover.size() == stubs.size()) break;
    stubs.swap(leftover);
  }
  return g;
}

}  // namespace gnutellab
