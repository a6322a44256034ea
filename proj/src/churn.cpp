#include "gnutellab/churn.hpp"

#include <cmath>

#include "gnutellab/error.hpp"

namespace gnutellab {

double ChurnModel::cdf(double hours) const {
  if (hours <= 0.0) return 0.0;
  return -std::expm1(-std::pow(hours / scale_hours, shape));
}

double ChurnModel::quantile(double p) const {
  if (!(p >= 0.0 && p < 1.0)) throw InvalidArgument("quantile level must be in [0, 1)");
  return scale_hours * std::pow(-std::log1p(-p), 1.0 / shape);
}

double ChurnModel::mean_hours() const { return scale_hours * std::tgamma(1.0 + 1.0 / shape); }

ChurnModel calibrate_churn(Quantile q1, Quantile q2) {
  if (!(q1.cdf > 0.0 && q1.cdf < q2.cdf && q2.cdf < 1.0)) {
    throw InvalidArgument("churn quantiles need 0 < cdf1 < cdf2 < 1");
  }
  if (!(q1.hours > 0.0 && q1.hours < q2.hours)) {
    throw InvalidArgument("churn quantiles need 0 < hours1 < hours2");
  }
  // ln(-ln(1 - F)) = k ln t - k ln(lambda)
  const double y1 = std::log(-std::log1p(-q1.cdf));
  const double y2 = std::log(-std::log1p(-q2.cdf));
  ChurnModel m;
  m.enabled = true;
  m.shape = (y2 - y1) / std::log(q2.hours / q1.hours);
  m.scale_hours = q1.hours / std::exp(y1 / m.shape);
  return m;
}

}  // namespace gnutellab
