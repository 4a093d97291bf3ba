#pragma once
/*
Optimal allocations and characteristic times.

For a unique-best-arm instance, the characteristic time solves
  T^{-1} = max_{w ∈ simplex} min_{i ≠ b} (μ_b − μ_i)² / (2(1/w_b + 1/w_i)),
optionally constrained to w_b = β. Both reduce to scalar root-finding:
  ψ(r) = Σ_{i≠b} 1/(rΔ_i² − 1)² − 1         (unconstrained)
  φ(r) = Σ_{i≠b} 1/(rΔ_i² − 1) − (1−β)/β    (constrained)
which are convex and decreasing past the pole r = 1/min Δ², so the roots are
unique. From the constrained root, T = 2r/β and w_i = β/(rΔ_i² − 1). From the
unconstrained root, the weight ratios are w_i/w_b = 1/(rΔ_i² − 1); T is then
recovered from the equilibrium identity 2/T = Δ_i²/(1/w_b + 1/w_i) (the ratio
path is the reliable one; see the brute-force cross-check in the tests).

ε-relaxations: the additive solver runs the base solver on the instance with
every arm except the candidate lowered by ε. The multiplicative variant
(target: an arm with mean ≥ (1−ε)μ⋆, means > 0) equalizes the transportation
costs (μ_b − (1−ε)μ_j)²/(1/β + (1−ε)²/w_j) by bisecting on the common cost
level, with an outer golden-section over β when β is not fixed.
*/
#include <optional>
#include <vector>

namespace purex {

struct Allocation {
  std::vector<double> weights;       // simplex vector over arms
  double time = 0.0;                 // characteristic time T
  std::optional<double> beta;        // present for β-constrained solutions
};

struct HardnessConstants {
  double h_eps = 0.0;                // anytime error-rate constant at slack ε̃
  std::vector<double> h_levels;      // per-gap-level constants, entry l = level l+1
};

// ψ and φ above; r must lie strictly past the pole (domain error otherwise).
double psi_value(const std::vector<double>& means, double r);
double phi_value(const std::vector<double>& means, double beta, double r);

// Throw std::invalid_argument on a non-unique best arm or bad β, and
// std::runtime_error if root refinement fails to reach |f| <= 1e-12.
Allocation solve_bai_beta(const std::vector<double>& means, double beta);
Allocation solve_bai(const std::vector<double>& means);

// Arm i kept, every other mean lowered by ε.
std::vector<double> modified_instance(const std::vector<double>& means, double eps, int i);

// Additive ε-good solver. i defaults to the lowest-index best arm; it must be
// ε-good. β omitted gives the unconstrained allocation.
Allocation solve_eps(const std::vector<double>& means, double eps,
                     std::optional<double> beta = std::nullopt,
                     std::optional<int> i = std::nullopt);

// Multiplicative ε-good solver; requires strictly positive means, ε in [0,1).
Allocation solve_eps_multiplicative(const std::vector<double>& means, double eps,
                                    std::optional<double> beta = std::nullopt);

// Closed-form complexity constants: h_eps at slack ε̃ plus the per-level
// constants (levels 1..C_μ−1 of the gap structure).
HardnessConstants hardness_constants(const std::vector<double>& means, double eps0,
                                     double eps_tilde);

}  // namespace purex
