#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "purex/sampling.hpp"
#include "purex/stopping.hpp"
#include "purex/thresholds.hpp"

using purex::ArmStatistics;

namespace {

ArmStatistics make_stats(const std::vector<double>& means, const std::vector<long long>& counts) {
  ArmStatistics s(static_cast<int>(means.size()));
  s.step = 1;
  for (int i = 0; i < s.K(); ++i) {
    s.counts[i] = counts[i];
    s.sums[i] = means[i] * static_cast<double>(counts[i]);
    s.step += counts[i];
  }
  return s;
}

// A heuristic threshold tuned so that c(n, delta) equals the wanted level at
// the sample count n: delta = (1 + ln n) / exp(c).
purex::ThresholdKind kind_with_c(long long n, double c) {
  return purex::ThresholdKind::heuristic((1.0 + std::log(static_cast<double>(n))) /
                                         std::exp(c));
}

}  // namespace

TEST_CASE("additive GLR statistic") {
  const auto stats = make_stats({1.0, 0.0}, {8, 8});
  CHECK(purex::glr_statistic(stats, 0.0) == doctest::Approx(2.0).epsilon(1e-12));
  // Quadrupling every count doubles the statistic exactly.
  const auto wide = make_stats({1.0, 0.0}, {32, 32});
  CHECK(purex::glr_statistic(wide, 0.0) ==
        doctest::Approx(2.0 * purex::glr_statistic(stats, 0.0)).epsilon(1e-12));
  // Tied empirical means never separate.
  CHECK(purex::glr_statistic(make_stats({0.5, 0.5}, {64, 64}), 0.0) == 0.0);
  // The slack enters the numerator.
  CHECK(purex::glr_statistic(stats, 0.3) == doctest::Approx(2.6).epsilon(1e-12));
}

TEST_CASE("additive GLR decisions at tuned thresholds") {
  // n = 16 samples, so the check evaluates the threshold at n - 1 = 15.
  const auto stats = make_stats({1.0, 0.0}, {8, 8});
  const auto loose = purex::glr_check(stats, 0.0, kind_with_c(15, 1.5));
  CHECK(loose.statistic == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(loose.threshold == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  CHECK(loose.stop);
  const auto strict = purex::glr_check(stats, 0.0, kind_with_c(15, 2.5));
  CHECK(strict.threshold == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
  CHECK_FALSE(strict.stop);
}

TEST_CASE("multiplicative GLR statistic") {
  const auto stats = make_stats({1.0, 0.5}, {8, 8});
  // (1 - 0.8*0.5)/sqrt(1/8 + 0.64/8), 20-digit reference value.
  const double want = 1.3251783128981585307;
  CHECK(purex::glr_statistic_multiplicative(stats, 0.2) ==
        doctest::Approx(want).epsilon(1e-12));
  const auto wide = make_stats({1.0, 0.5}, {32, 32});
  CHECK(purex::glr_statistic_multiplicative(wide, 0.2) ==
        doctest::Approx(2.0 * want).epsilon(1e-12));
  // Decision against sqrt(2 c) with c = 1: only the quadrupled counts stop.
  CHECK(purex::glr_statistic_multiplicative(stats, 0.2) < std::sqrt(2.0));
  CHECK(purex::glr_statistic_multiplicative(wide, 0.2) >= std::sqrt(2.0));

  SUBCASE("zero slack collapses to the additive statistic") {
    const auto s = make_stats({0.8, 0.5}, {10, 7});
    CHECK(purex::glr_statistic_multiplicative(s, 0.0) ==
          doctest::Approx(purex::glr_statistic(s, 0.0)).epsilon(1e-15));
  }
  SUBCASE("statistic grows with the slack") {
    double prev = purex::glr_statistic_multiplicative(stats, 0.0);
    for (double eps = 0.05; eps < 0.9; eps += 0.05) {
      const double cur = purex::glr_statistic_multiplicative(stats, eps);
      REQUIRE(cur > prev);
      prev = cur;
    }
  }
  SUBCASE("negative empirical means can drive the statistic negative") {
    const auto s = make_stats({-1.0, -1.01}, {50, 50});
    CHECK(purex::glr_statistic_multiplicative(s, 0.5) < 0.0);
    const auto d = purex::glr_check_multiplicative(s, 0.5, kind_with_c(99, 2.0));
    CHECK_FALSE(d.stop);
  }
}

TEST_CASE("GLR checks are consistent and guarded") {
  const auto stats = make_stats({1.0, 0.2, 0.0}, {40, 30, 30});
  const auto kind = purex::ThresholdKind::heuristic(0.01);
  const auto d = purex::glr_check(stats, 0.1, kind);
  CHECK(d.stop == (d.statistic >= d.threshold));
  CHECK(d.threshold ==
        doctest::Approx(std::sqrt(2.0 * kind.value(stats.step - 2))).epsilon(1e-12));

  SUBCASE("no check before every arm has one sample plus one round") {
    auto boundary = make_stats({1.0, 0.0}, {1, 1});
    CHECK_THROWS_AS(purex::glr_check(boundary, 0.0, kind), std::invalid_argument);
    auto ready = make_stats({1.0, 0.0}, {2, 1});
    CHECK_NOTHROW(purex::glr_check(ready, 0.0, kind));
  }
  SUBCASE("slack validation") {
    CHECK_THROWS_AS(purex::glr_check(stats, -0.1, kind), std::invalid_argument);
    CHECK_THROWS_AS(purex::glr_check_multiplicative(stats, 1.0, kind), std::invalid_argument);
  }
}
