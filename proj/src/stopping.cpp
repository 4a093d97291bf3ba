#include "purex/stopping.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace purex {

double glr_statistic(const ArmStatistics& stats, double eps) {
  const int ihat = eb_leader(stats);
  const double mu = stats.mean(ihat);
  const double inv_n = 1.0 / static_cast<double>(stats.counts[ihat]);
  double min_cost = std::numeric_limits<double>::infinity();
  for (int i = 0; i < stats.K(); ++i) {
    if (i == ihat) continue;
    const double cost = (mu - stats.mean(i) + eps) /
                        std::sqrt(inv_n + 1.0 / static_cast<double>(stats.counts[i]));
    min_cost = std::min(min_cost, cost);
  }
  return min_cost;
}

double glr_statistic_multiplicative(const ArmStatistics& stats, double eps) {
  const int ihat = eb_leader(stats);
  const double mu = stats.mean(ihat);
  const double inv_n = 1.0 / static_cast<double>(stats.counts[ihat]);
  const double shrink = 1.0 - eps;
  double min_cost = std::numeric_limits<double>::infinity();
  for (int i = 0; i < stats.K(); ++i) {
    if (i == ihat) continue;
    const double cost = (mu - shrink * stats.mean(i)) /
                        std::sqrt(inv_n + shrink * shrink / static_cast<double>(stats.counts[i]));
    min_cost = std::min(min_cost, cost);
  }
  return min_cost;
}

namespace {

StopDecision check_with(double statistic, const ArmStatistics& stats, const ThresholdKind& kind) {
  // stats.step - 1 samples have been consumed; the check needs n > K and the
  // threshold is evaluated at n - 1.
  if (stats.step <= stats.K() + 1) throw std::invalid_argument("stopping requires n > K");
  StopDecision d;
  d.statistic = statistic;
  d.threshold = std::sqrt(2.0 * kind.value(stats.step - 2));
  d.stop = d.statistic >= d.threshold;
  return d;
}

}  // namespace

StopDecision glr_check(const ArmStatistics& stats, double eps, const ThresholdKind& kind) {
  if (eps < 0.0) throw std::invalid_argument("glr_check requires eps >= 0");
  return check_with(glr_statistic(stats, eps), stats, kind);
}

StopDecision glr_check_multiplicative(const ArmStatistics& stats, double eps,
                                      const ThresholdKind& kind) {
  if (!(eps >= 0.0 && eps < 1.0)) {
    throw std::invalid_argument("glr_check_multiplicative requires eps in [0,1)");
  }
  return check_with(glr_statistic_multiplicative(stats, eps), stats, kind);
}

}  // namespace purex
