#pragma once
/*
Deterministic random streams for the simulation harness.

The generator is SplitMix64 (a Weyl-sequence counter pushed through a 64-bit
finalizer), so the sequence for a given (seed, stream) pair is a pure function
of integers — identical on every platform and independent of how many worker
threads consume other streams. Gaussian variates use the AS241 rational
approximation of the inverse normal CDF (|relative error| ~ 1e-15) instead of
std::normal_distribution, whose output differs between standard libraries.
*/
#include <cstdint>

namespace purex {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Inverse standard normal CDF (Wichura's algorithm AS241, PPND16 variant).
// Requires p in (0, 1).
double inv_normal_cdf(double p);

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    // Mix seed and stream through two finalizer passes so that nearby seeds
    // (base_seed + run_id) and sibling streams are decorrelated.
    state_ = seed;
    (void)splitmix64(state_);
    state_ ^= (stream + 1) * 0xD1B54A32D192ED03ULL;
    (void)splitmix64(state_);
  }

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform on [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via inverse CDF; the offset keeps p strictly inside (0,1).
  double next_gaussian() {
    double p = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    return inv_normal_cdf(p);
  }

  bool next_bernoulli(double p) { return next_double() < p; }

 private:
  std::uint64_t state_;
};

}  // namespace purex
