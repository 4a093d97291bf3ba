#pragma once
/*
Bandit instances and their gap structure.

An instance is a mean vector μ over K >= 2 arms plus a reward family. The gap
of arm i is Δ_i = μ⋆ − μ_i; the distinct gaps sorted ascending (Δ_1 = 0 first)
partition the arms into classes. The ε-good set is {i : μ_i >= μ⋆ − ε}.

Arm indices are 0-based everywhere in the library; user-facing output (CLI,
CSV) renders them 1-based.
*/
#include <cstdint>
#include <string>
#include <vector>

namespace purex {

enum class RewardFamily { GaussianUnitVariance, BernoulliClamped };

struct BanditInstance {
  std::vector<double> means;
  RewardFamily family = RewardFamily::GaussianUnitVariance;

  int K() const { return static_cast<int>(means.size()); }
  double best_mean() const;
  int best_arm() const;  // lowest index attaining the max
};

struct GapStructure {
  std::vector<double> distinct_gaps;       // ascending, starts at 0
  std::vector<std::vector<int>> classes;   // arms sharing each gap value
  int c_mu = 0;                            // number of distinct means
};

struct InstanceSpec {
  enum class Kind { Alpha, Sparse, TwoGroups, RandomEpsGood, Explicit };
  Kind kind = Kind::Explicit;
  RewardFamily family = RewardFamily::GaussianUnitVariance;
  int K = 0;
  double alpha = 1.0;          // Alpha: μ_i = 1 − ((i−1)/(K−1))^α, 1-based i
  int n_best = 1;              // TwoGroups: arms at the high mean
  double high = 0.6;
  double low = 0.4;
  double eps = 0.1;            // RandomEpsGood
  int n_good = 1;              // RandomEpsGood: ε-good arms besides arm 1
  std::uint64_t seed = 0;      // RandomEpsGood
  std::vector<double> means;   // Explicit

  std::string tag() const;     // short identifier used in CSV output
};

// Deterministic for all kinds; RandomEpsGood is deterministic given its seed.
// Throws std::invalid_argument on parameter violations.
BanditInstance generate_instance(const InstanceSpec& spec);

// Arms within ε of the best mean, sorted ascending; never empty.
std::vector<int> eps_good_set(const BanditInstance& inst, double eps);

// Multiplicative counterpart: {i : μ_i >= (1−ε)·μ⋆}. Requires positive means.
std::vector<int> eps_good_set_multiplicative(const BanditInstance& inst, double eps);

// Distinct-gap detection uses exact equality by default; tol > 0 merges means
// within tol (for externally supplied vectors).
GapStructure gap_structure(const std::vector<double>& means, double tol = 0.0);

// 0-based position l such that ε ∈ [distinct_gaps[l], distinct_gaps[l+1]),
// with the sentinel gap +inf past the end. Rendered 1-based in output.
int gap_index(const GapStructure& gaps, double eps);

}  // namespace purex
