#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string_view>
#include <utility>
#include <vector>

#include "gnutellab/graph.hpp"
#include "gnutellab/metrics.hpp"

namespace gnutellab {

struct PowerLawFit {
  double exponent_k = 0.0;  // minus the log-log slope
  double intercept = 0.0;   // log10 count at degree 1
  double r_squared = 0.0;
  double residual = 0.0;    // sum of squared log10 residuals
  std::size_t fit_min = 0;  // smallest and largest degree used
  std::size_t fit_max = 0;
  std::size_t points = 0;
};

// Least squares of log10(count) on log10(degree) over the nonzero bins with
// min_degree <= degree <= max_degree. Degree 0 is never used.
PowerLawFit fit_power_law(const DegreeDistribution& dist, std::size_t min_degree = 1,
                          std::size_t max_degree = std::numeric_limits<std::size_t>::max());

// Largest d such that every degree in [min_degree, d] has a nonzero count.
// Sparse tails are dominated by count-1 bins that flatten a raw-bin fit;
// capping the fit here keeps it on the populated range.
std::size_t contiguous_max_degree(const DegreeDistribution& dist, std::size_t min_degree);

struct MultiModalFit {
  std::size_t knee = 0;
  double head_level = 0.0;     // mean count of the nonzero bins below the knee
  double head_flatness = 0.0;  // max / min of those counts
  bool degenerate_head = false;  // head_flatness > 2: no flat region
  PowerLawFit tail;
  double residual = 0.0;
  // (candidate, combined residual) for every usable candidate.
  std::vector<std::pair<std::size_t, double>> candidate_residuals;
};

std::vector<std::size_t> default_knee_candidates();  // 5..20

// For each candidate knee the head (degrees below it) is fitted as a
// constant in log space and the tail as a power law; the smallest combined
// squared residual wins, ties going to the smaller knee.
MultiModalFit fit_multimodal(const DegreeDistribution& dist,
                             const std::vector<std::size_t>& knee_candidates = default_knee_candidates());

enum class RemovalStrategy { Random, Targeted };
std::string_view to_string(RemovalStrategy s);
RemovalStrategy parse_removal_strategy(std::string_view name);

struct RobustnessPoint {
  double removed_fraction = 0.0;
  std::size_t removed = 0;
  double largest_component_fraction = 0.0;  // over surviving nodes
  double largest_component_of_original = 0.0;  // over the original node count
};

struct RobustnessCurve {
  RemovalStrategy strategy = RemovalStrategy::Random;
  std::vector<RobustnessPoint> points;
};

// Removes round(f * N) nodes for each fraction f in [0, 1). Targeted removal
// takes nodes by initial degree, highest first, ties to the smaller id;
// random removal follows one seeded permutation, so the removed sets are
// nested across fractions. Fractions are processed in ascending order.
RobustnessCurve robustness_experiment(const OverlayGraph& graph, RemovalStrategy strategy,
                                      std::vector<double> fractions, std::uint64_t seed);

struct TrafficEstimate {
  double connections = 0.0;
  double per_connection_bps = 0.0;
  double aggregate_bps = 0.0;
  double bytes_per_month = 0.0;  // 30-day month

  double terabytes_per_month() const { return bytes_per_month / 1e12; }
};

inline constexpr double kSecondsPerMonth = 30.0 * 24.0 * 3600.0;

TrafficEstimate traffic_estimate(double connections, double per_connection_bps);

void write_degree_csv(const DegreeDistribution& dist, std::ostream& out);
void write_path_csv(const PathLengthDistribution& dist, std::ostream& out);
void write_robustness_csv(const RobustnessCurve& curve, std::ostream& out);
void write_multimodal_csv(const MultiModalFit& fit, std::ostream& out);

}  // namespace gnutellab
