#include "purex/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace purex {

double lambert_wbar(double x) {
  if (!(x >= 1.0)) throw std::invalid_argument("lambert_wbar requires x >= 1");
  if (x == 1.0) return 1.0;
  double lo = x + std::log(x);
  double hi = lo + std::min(0.5, 1.0 / std::sqrt(x));
  // w − ln w is increasing on [1, ∞), so plain bisection inside the bracket.
  // Large x puts the bracket where 1e-12 is below the double spacing; stop
  // once the midpoint stops separating the endpoints.
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (mid - std::log(mid) < x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double riemann_zeta(double s) {
  if (!(s > 1.0) || !(s <= 2.0)) {
    throw std::invalid_argument("riemann_zeta implemented for s in (1, 2]");
  }
  // Euler–Maclaurin: sum the first N−1 terms directly, then
  //   N^{1−s}/(s−1) + N^{−s}/2 + Σ_j B_{2j}/(2j)! · (s)_{2j−1} · N^{−s−2j+1}.
  constexpr int N = 24;
  double sum = 0.0;
  for (int k = 1; k < N; ++k) sum += std::pow(static_cast<double>(k), -s);
  const double Nd = static_cast<double>(N);
  sum += std::pow(Nd, 1.0 - s) / (s - 1.0);
  sum += 0.5 * std::pow(Nd, -s);
  // Bernoulli numbers B_2, B_4, B_6, B_8 over factorials.
  static const double bern[] = {1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0};
  double rising = s;                      // (s)(s+1)...(s+2j−2)
  double npow = std::pow(Nd, -s - 1.0);
  for (int j = 0; j < 4; ++j) {
    sum += bern[j] * rising * npow;
    rising *= (s + 2 * j + 1) * (s + 2 * j + 2);
    npow /= Nd * Nd;
  }
  return sum;
}

namespace {

double cg_objective(double lambda, double x) {
  if (lambda <= 0.5 || lambda >= 1.0) return std::numeric_limits<double>::infinity();
  const double g = 2.0 * lambda - 2.0 * lambda * std::log(4.0 * lambda) +
                   std::log(riemann_zeta(2.0 * lambda)) - 0.5 * std::log1p(-lambda);
  return (g + x) / lambda;
}

}  // namespace

double c_gaussian(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("c_gaussian requires x > 0");
  // The objective diverges at both ends (ζ(2λ) at 1/2⁺, −ln(1−λ)/2 at 1⁻), so
  // the minimizer is interior: coarse grid scan, then golden-section around it.
  constexpr double kLo = 0.5 + 1e-9;
  constexpr double kHi = 1.0 - 1e-9;
  constexpr double kGrid = 1e-3;
  double best_l = kLo, best_v = std::numeric_limits<double>::infinity();
  for (double l = kLo; l < kHi; l += kGrid) {
    const double v = cg_objective(l, x);
    if (v < best_v) {
      best_v = v;
      best_l = l;
    }
  }
  double a = std::max(kLo, best_l - 2.0 * kGrid);
  double b = std::min(kHi, best_l + 2.0 * kGrid);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = cg_objective(c, x), fd = cg_objective(d, x);
  while (b - a > 1e-12) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = cg_objective(c, x);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = cg_objective(d, x);
    }
  }
  return std::min(fc, fd);
}

ThresholdKind ThresholdKind::proven(int K, double delta) {
  if (K < 2) throw std::invalid_argument("proven threshold requires K >= 2");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  ThresholdKind t;
  t.proven_ = true;
  t.K_ = K;
  t.delta_ = delta;
  t.proven_const_ = 2.0 * c_gaussian(std::log((K - 1) / delta) / 2.0);
  t.name_ = "proven";
  return t;
}

ThresholdKind ThresholdKind::heuristic(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  ThresholdKind t;
  t.proven_ = false;
  t.delta_ = delta;
  t.name_ = "heuristic";
  return t;
}

ThresholdKind ThresholdKind::parse(const std::string& name, int K, double delta) {
  if (name == "proven") return proven(K, delta);
  if (name == "heuristic") return heuristic(delta);
  throw std::invalid_argument("unknown threshold kind: " + name);
}

double ThresholdKind::value(long long n) const {
  if (n < 2) throw std::invalid_argument("threshold requires n >= 2");
  const double nd = static_cast<double>(n);
  if (proven_) {
    return proven_const_ + 4.0 * std::log(4.0 + std::log(nd / 2.0));
  }
  return std::log((1.0 + std::log(nd)) / delta_);
}

}  // namespace purex
