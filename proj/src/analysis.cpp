#include "gnutellab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "gnutellab/csv.hpp"

namespace gnutellab {
namespace {

struct UnionFind {
  std::vector<NodeId> parent;
  std::vector<std::size_t> size;

  explicit UnionFind(std::size_t n) : parent(n), size(n, 1) {
    std::iota(parent.begin(), parent.end(), NodeId{0});
  }
  NodeId find(NodeId x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(NodeId a, NodeId b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
  }
};

}  // namespace

std::size_t contiguous_max_degree(const DegreeDistribution& dist, std::size_t min_degree) {
  if (dist.count(min_degree) == 0) throw InvalidArgument("no nodes at the minimum degree");
  std::size_t d = min_degree;
  while (dist.count(d + 1) != 0) ++d;
  return d;
}

PowerLawFit fit_power_law(const DegreeDistribution& dist, std::size_t min_degree,
                          std::size_t max_degree) {
  std::vector<double> xs, ys;
  PowerLawFit fit;
  for (const auto& [degree, count] : dist.counts) {
    if (degree == 0 || count == 0 || degree < min_degree || degree > max_degree) continue;
    xs.push_back(std::log10(static_cast<double>(degree)));
    ys.push_back(std::log10(static_cast<double>(count)));
    if (fit.points++ == 0) fit.fit_min = degree;
    fit.fit_max = degree;
  }
  if (xs.size() < 2) {
    throw InvalidArgument("power-law fit needs at least two nonzero degrees in range, got " +
                          std::to_string(xs.size()));
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  fit.exponent_k = -slope;
  fit.intercept = my - slope * mx;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.intercept + slope * xs[i]);
    fit.residual += e * e;
  }
  fit.r_squared = syy > 0.0 ? std::max(0.0, 1.0 - fit.residual / syy) : 1.0;
  return fit;
}

std::vector<std::size_t> default_knee_candidates() {
  std::vector<std::size_t> out;
  for (std::size_t k = 5; k <= 20; ++k) out.push_back(k);
  return out;
}

MultiModalFit fit_multimodal(const DegreeDistribution& dist,
                             const std::vector<std::size_t>& knee_candidates) {
  if (dist.total() == 0) throw InvalidArgument("multimodal fit of an empty histogram");
  MultiModalFit best;
  bool found = false;
  std::vector<std::size_t> candidates = knee_candidates;
  std::sort(candidates.begin(), candidates.end());
  for (std::size_t knee : candidates) {
    if (knee < 2) continue;
    std::vector<double> head;
    for (const auto& [degree, count] : dist.counts) {
      if (degree >= 1 && degree < knee && count > 0) head.push_back(static_cast<double>(count));
    }
    if (head.empty()) continue;
    PowerLawFit tail;
    try {
      tail = fit_power_law(dist, knee);
    } catch (const InvalidArgument&) {
      continue;
    }
    double mean_log = 0.0;
    for (double c : head) mean_log += std::log10(c);
    mean_log /= static_cast<double>(head.size());
    double head_ssr = 0.0;
    for (double c : head) head_ssr += (std::log10(c) - mean_log) * (std::log10(c) - mean_log);
    const double residual = head_ssr + tail.residual;
    best.candidate_residuals.emplace_back(knee, residual);
    if (!found || residual < best.residual) {
      found = true;
      best.knee = knee;
      best.residual = residual;
      best.tail = tail;
      best.head_level = std::accumulate(head.begin(), head.end(), 0.0) / static_cast<double>(head.size());
      const auto [lo, hi] = std::minmax_element(head.begin(), head.end());
      best.head_flatness = *hi / *lo;
      best.degenerate_head = best.head_flatness > 2.0;
    }
  }
  if (!found) throw InvalidArgument("no knee candidate has both a head and a fittable tail");
  return best;
}

std::string_view to_string(RemovalStrategy s) {
  return s == RemovalStrategy::Random ? "random" : "targeted";
}

RemovalStrategy parse_removal_strategy(std::string_view name) {
  if (name == "random") return RemovalStrategy::Random;
  if (name == "targeted") return RemovalStrategy::Targeted;
  throw InvalidArgument("unknown removal strategy '" + std::string(name) + "'");
}

RobustnessCurve robustness_experiment(const OverlayGraph& graph, RemovalStrategy strategy,
                                      std::vector<double> fractions, std::uint64_t seed) {
  for (double f : fractions) {
    if (!(f >= 0.0 && f < 1.0)) throw InvalidArgument("removal fractions must lie in [0, 1)");
  }
  std::sort(fractions.begin(), fractions.end());
  std::vector<NodeId> order = graph.nodes();
  if (strategy == RemovalStrategy::Targeted) {
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeId a, NodeId b) { return graph.degree(a) > graph.degree(b); });
  } else {
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  const std::size_t n = order.size();
  RobustnessCurve curve;
  curve.strategy = strategy;
  std::vector<char> removed(graph.id_bound(), 0);
  std::size_t done = 0;
  for (double f : fractions) {
    const auto count = static_cast<std::size_t>(std::llround(f * static_cast<double>(n)));
    for (; done < count && done < n; ++done) removed[order[done]] = 1;
    UnionFind uf(graph.id_bound());
    for (const auto& [a, b] : graph.edges()) {
      if (!removed[a] && !removed[b]) uf.unite(a, b);
    }
    std::size_t largest = 0;
    for (NodeId id : order) {
      if (!removed[id] && uf.find(id) == id) largest = std::max(largest, uf.size[id]);
    }
    const std::size_t survivors = n - done;
    RobustnessPoint p;
    p.removed_fraction = f;
    p.removed = done;
    p.largest_component_fraction =
        survivors ? static_cast<double>(largest) / static_cast<double>(survivors) : 0.0;
    p.largest_component_of_original = n ? static_cast<double>(largest) / static_cast<double>(n) : 0.0;
    curve.points.push_back(p);
  }
  return curve;
}

TrafficEstimate traffic_estimate(double connections, double per_connection_bps) {
  if (!(connections > 0.0)) throw InvalidArgument("connections must be positive");
  if (!(per_connection_bps > 0.0)) throw InvalidArgument("per-connection bandwidth must be positive");
  TrafficEstimate t;
  t.connections = connections;
  t.per_connection_bps = per_connection_bps;
  t.aggregate_bps = connections * per_connection_bps;
  t.bytes_per_month = t.aggregate_bps / 8.0 * kSecondsPerMonth;
  return t;
}

void write_degree_csv(const DegreeDistribution& dist, std::ostream& out) {
  CsvWriter csv(out);
  csv.cells("degree", "count");
  for (const auto& [d, c] : dist.counts) csv.cells(d, c);
}

void write_path_csv(const PathLengthDistribution& dist, std::ostream& out) {
  CsvWriter csv(out);
  csv.cells("distance", "pairs");
  for (const auto& [d, c] : dist.counts) csv.cells(d, c);
  csv.cells("unreachable", dist.unreachable_pairs);
}

void write_robustness_csv(const RobustnessCurve& curve, std::ostream& out) {
  CsvWriter csv(out);
  csv.cells("strategy", "fraction", "removed", "largest_component_fraction",
            "largest_component_of_original");
  for (const auto& p : curve.points) {
    csv.cells(to_string(curve.strategy), p.removed_fraction, p.removed,
              p.largest_component_fraction, p.largest_component_of_original);
  }
}

void write_multimodal_csv(const MultiModalFit& fit, std::ostream& out) {
  CsvWriter csv(out);
  csv.cells("knee_candidate", "residual", "selected");
  for (const auto& [knee, r] : fit.candidate_residuals) csv.cells(knee, r, int(knee == fit.knee));
}

}  // namespace gnutellab
