#pragma once

#include <cstddef>

namespace gnutellab {

// Session lengths ~ Weibull(shape, scale_hours). Nodes whose connection
// limit is at least hub_degree_threshold draw sessions with the scale
// multiplied by hub_availability_boost.
struct ChurnModel {
  bool enabled = false;
  double shape = 1.0;
  double scale_hours = 1.0;
  // Joins per hour; 0 keeps the expected population at the target.
  double arrival_rate_per_hour = 0.0;
  double hub_availability_boost = 1.0;
  std::size_t hub_degree_threshold = 10;

  double cdf(double hours) const;
  double quantile(double p) const;
  double mean_hours() const;
};

struct Quantile {
  double hours;
  double cdf;
};

// Weibull with CDF(q1.hours) = q1.cdf and CDF(q2.hours) = q2.cdf, solved in
// closed form. Requires 0 < q1.cdf < q2.cdf < 1 and 0 < q1.hours < q2.hours.
ChurnModel calibrate_churn(Quantile q1, Quantile q2);

}  // namespace gnutellab
