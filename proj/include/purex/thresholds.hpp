#pragma once
/*
Stopping thresholds c(n, δ) for the sequential tests.

Two kinds are exposed:
  proven    c(n,δ) = 2·C_G(ln((K−1)/δ)/2) + 4·ln(4 + ln(n/2))
  heuristic c(n,δ) = ln((1 + ln n)/δ)
where C_G(x) = min over λ ∈ (1/2, 1] of (g(λ) + x)/λ with
  g(λ) = 2λ − 2λ·ln(4λ) + ln ζ(2λ) − ln(1−λ)/2.
The proven kind is what the δ-correctness guarantee covers; the heuristic kind
is the experiment default. All logarithms are natural.

Also here: the inverse of w ↦ w − ln w on [1, ∞), which appears in the
sample-complexity bounds and satisfies x + ln x ≤ W̄(x) ≤ x + ln x + min(1/2, 1/√x).
*/
#include <string>

namespace purex {

// Unique w >= 1 with w − ln w = x; requires x >= 1. Bisection on the bracket
// above, absolute tolerance 1e-12 or machine resolution, whichever is coarser.
double lambert_wbar(double x);

// Riemann ζ(s) for s in (1, 2], Euler–Maclaurin tail to ~1e-13 accuracy.
double riemann_zeta(double s);

// C_G(x) for x > 0: golden-section over λ seeded by a coarse grid scan.
double c_gaussian(double x);

class ThresholdKind {
 public:
  static ThresholdKind proven(int K, double delta);
  static ThresholdKind heuristic(double delta);
  // name is "proven" or "heuristic" (case-sensitive).
  static ThresholdKind parse(const std::string& name, int K, double delta);

  // c(n, δ); requires n >= 2. The stopping rule evaluates this at n−1.
  double value(long long n) const;

  double delta() const { return delta_; }
  bool is_proven() const { return proven_; }
  const std::string& name() const { return name_; }

 private:
  ThresholdKind() = default;
  bool proven_ = false;
  int K_ = 2;
  double delta_ = 0.01;
  double proven_const_ = 0.0;  // 2·C_G(ln((K−1)/δ)/2), n-independent
  std::string name_;
};

}  // namespace purex
