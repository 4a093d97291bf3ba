#pragma once

/*
  GLR stopping rules for additive and multiplicative ε-best-arm identification.

  With î_n the empirical best arm (lowest index on ties), stop once

    additive:        min_{i≠î} (μ̂_î − μ̂_i + ε) / sqrt(1/N_î + 1/N_i)
    multiplicative:  min_{i≠î} (μ̂_î − (1−ε)μ̂_i) / sqrt(1/N_î + (1−ε)²/N_i)

  reaches sqrt(2 c(n−1, δ)). The statistic is signed (a competitor ahead of î
  by more than ε drives it negative); no clamping. Multiplying every count by
  4 doubles the statistic exactly, and the statistic is nondecreasing in ε.
*/

#include "purex/sampling.hpp"
#include "purex/thresholds.hpp"

namespace purex {

struct StopDecision {
  bool stop = false;
  double statistic = 0.0;  // the min transportation cost
  double threshold = 0.0;  // sqrt(2 c(n−1, δ))
};

// Statistics-only forms, for callers that pin the threshold themselves.
double glr_statistic(const ArmStatistics& stats, double eps);
double glr_statistic_multiplicative(const ArmStatistics& stats, double eps);

// Full checks: require n > K (thus every arm pulled); threshold at n−1.
StopDecision glr_check(const ArmStatistics& stats, double eps, const ThresholdKind& kind);
StopDecision glr_check_multiplicative(const ArmStatistics& stats, double eps,
                                      const ThresholdKind& kind);

}  // namespace purex
