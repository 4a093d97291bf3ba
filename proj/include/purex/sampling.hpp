#pragma once

/*
  Sequential sampling rules as uniform step state machines.

  Every sampler follows the same contract: select() names the arm to pull this
  round, update(arm, reward) folds the observation into the state, recommend()
  names the current guess (ties broken by lowest index everywhere). Rounds
  1..K pull each arm once, except LUCB (which pairs pulls after its one-per-arm
  init) and SH/DSH (whose phase schedules already start round-robin).

  The Top-Two family pairs an empirical-best leader B with a transportation-
  cost challenger C,

    additive:        C = argmin_{i≠B} (μ̂_B − μ̂_i + ε₀) / sqrt(1/N_B + 1/N_i),
    multiplicative:  C = argmin_{i≠B} (μ̂_B − (1−ε₀)μ̂_i)
                                      / sqrt(1/N_B + (1−ε₀)²/N_i),

  and picks between them with a K(K−1)-pairwise tracking procedure: with
  proportion β_n(B,C) (fixed, IDS N_C/(N_B+N_C), or its multiplicative
  analogue N_C/((1−ε₀)²N_B + N_C)), update the running average
  β̄_{n+1} = (T_n β̄_n + β_n)/T_{n+1} and pull the challenger iff
  N^B_C ≤ (1 − β̄_{n+1}) T_{n+1}. The deviation N^B_C − (1−β̄_n)T_n stays in
  [−1/2, 1] after every update.
*/

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "purex/rng.hpp"
#include "purex/thresholds.hpp"

namespace purex {

// Running sufficient statistics: pull counts, reward sums, and the 1-based
// index of the next round to play (step − 1 samples have been consumed).
struct ArmStatistics {
  std::vector<std::int64_t> counts;
  std::vector<double> sums;
  std::int64_t step = 1;

  explicit ArmStatistics(int K) : counts(K, 0), sums(K, 0.0) {}
  int K() const { return static_cast<int>(counts.size()); }
  double mean(int i) const { return sums[i] / static_cast<double>(counts[i]); }
  void record(int arm, double reward) {
    counts[arm] += 1;
    sums[arm] += reward;
    step += 1;
  }
};

// Pairwise tracking state for Top-Two samplers, indexed (leader, challenger).
struct TrackingTable {
  int K = 0;
  std::vector<std::int64_t> pair_counts;       // T_n(i,j)
  std::vector<std::int64_t> challenger_pulls;  // N^i_{n,j}
  std::vector<double> beta_bar;                // β̄_n(i,j)

  explicit TrackingTable(int K_)
      : K(K_), pair_counts(K_ * K_, 0), challenger_pulls(K_ * K_, 0), beta_bar(K_ * K_, 0.0) {}
  std::int64_t pair_count(int i, int j) const { return pair_counts[i * K + j]; }
  std::int64_t challenger_count(int i, int j) const { return challenger_pulls[i * K + j]; }
  double beta_bar_at(int i, int j) const { return beta_bar[i * K + j]; }
};

// How the tracking procedure chooses the leader proportion β_n.
struct TrackSpec {
  enum class Kind { FixedBeta, IDS, IDSMultiplicative };
  Kind kind = Kind::IDS;
  double beta = 0.5;  // FixedBeta only
  double eps0 = 0.0;  // IDSMultiplicative only

  static TrackSpec fixed(double beta);
  static TrackSpec ids();
  static TrackSpec ids_multiplicative(double eps0);
};

// Decreasing slack sequences for the anytime BAI variant.
struct SlackSchedule {
  enum class Kind { PolyHalf, LogHalf };
  Kind kind = Kind::PolyHalf;
  double alpha = 0.5;

  // PolyHalf: n^{−α/2}. LogHalf: log(n)^{−α/2}, clamped to 1 while log n ≤ 1.
  double eps_at(std::int64_t n) const;
};

int eb_leader(const ArmStatistics& stats);
int tc_challenger(const ArmStatistics& stats, int leader, double eps0);
int tcm_challenger(const ArmStatistics& stats, int leader, double eps0);

// Runs one tracking decision for the observed (leader, challenger) pair and
// returns the arm to pull, updating the table in place.
int tracking_select(TrackingTable& table, int leader, int challenger, const TrackSpec& mode,
                    const ArmStatistics& stats);

// Step-machine base. One run owns one sampler; no sharing across threads.
class Sampler {
 public:
  virtual ~Sampler() = default;
  virtual int select() = 0;
  virtual void update(int arm, double reward) { stats_.record(arm, reward); }
  virtual int recommend() const { return eb_leader(stats_); }
  // LUCB carries its own stopping rule; everything else defers to GLR.
  virtual bool uses_internal_stop() const { return false; }
  virtual bool wants_stop() const { return false; }
  const ArmStatistics& stats() const { return stats_; }

 protected:
  explicit Sampler(int K) : stats_(K) {}
  bool in_init() const { return stats_.step <= stats_.K(); }
  int init_arm() const { return static_cast<int>(stats_.step) - 1; }

  ArmStatistics stats_;
};

// EB leader + transportation-cost challenger + pairwise tracking, with either
// a constant slack (additive or multiplicative cost) or a decreasing schedule.
class TopTwoSampler : public Sampler {
 public:
  enum class Cost { Additive, Multiplicative };
  TopTwoSampler(int K, Cost cost, TrackSpec track, double eps0);
  TopTwoSampler(int K, TrackSpec track, SlackSchedule schedule);
  int select() override;
  const TrackingTable& table() const { return table_; }

 private:
  Cost cost_;
  TrackSpec track_;
  double eps0_ = 0.0;
  std::optional<SlackSchedule> schedule_;
  TrackingTable table_;
};

class UniformSampler : public Sampler {
 public:
  explicit UniformSampler(int K) : Sampler(K) {}
  int select() override { return static_cast<int>((stats_.step - 1) % stats_.K()); }
};

// LUCB: pulls the empirical best and its strongest competitor each logical
// round; stops once L_î + ε ≥ max_{i≠î} U_i with bonus sqrt(2 c(n−1,δ)/N_i).
class LucbSampler : public Sampler {
 public:
  LucbSampler(int K, double eps, ThresholdKind kind);
  int select() override;
  bool uses_internal_stop() const override { return true; }
  bool wants_stop() const override;

 private:
  double bonus(double c, int i) const;
  double eps_;
  ThresholdKind kind_;
  std::optional<int> pending_;
};

// ε-T3C: Thompson-sampling leader over Normal(μ̂_i, 1/N_i) posteriors,
// additive TC challenger, leader chosen with probability β.
class T3cSampler : public Sampler {
 public:
  T3cSampler(int K, double eps, double beta, const Rng& coin);
  int select() override;

 private:
  double eps_;
  double beta_;
  Rng coin_;
};

// ε-EB-TCI: EB leader; challenger minimizes
// 1{μ̂_B > μ̂_i}(μ̂_B − μ̂_i + ε)² / (2(1/N_B + 1/N_i)) + ln N_i; β coin.
class EbTciSampler : public Sampler {
 public:
  EbTciSampler(int K, double eps, double beta, const Rng& coin);
  int select() override;

 private:
  double eps_;
  double beta_;
  Rng coin_;
};

// ε-TTUCB: UCB leader with bonus sqrt(g(n)/N_i), g(n) = coef·ln(1+n);
// additive TC challenger; K per-leader tracking rules at β = 1/2 pulling the
// leader iff N^B_B ≤ (1/2) Σ_i T_{n+1}(B,i).
class TtucbSampler : public Sampler {
 public:
  TtucbSampler(int K, double eps, double g_coef);
  int select() override;
  const std::vector<std::int64_t>& leader_rounds() const { return leader_rounds_; }
  const std::vector<std::int64_t>& self_pulls() const { return self_pulls_; }

 private:
  double eps_;
  double g_coef_;
  std::vector<std::int64_t> leader_rounds_;
  std::vector<std::int64_t> self_pulls_;
};

// ε-Track-and-Stop: re-solves the allocation oracle on the empirical means
// each round, forces exploration of undersampled arms (min N < √n − K/2), and
// otherwise C-tracks the accumulated weights.
class TasSampler : public Sampler {
 public:
  TasSampler(int K, double eps);
  int select() override;

 private:
  double eps_;
  std::vector<double> weight_sums_;
};

// Successive Rejects: K−1 phases with cumulative per-arm targets
// n_k = ⌈(T−K)/(loḡ(K)(K+1−k))⌉, loḡ(K) = 1/2 + Σ_{i=2..K} 1/i; the worst
// empirical arm (all observations kept) is dropped at each phase end.
class SrSampler : public Sampler {
 public:
  SrSampler(int K, std::int64_t budget);
  int select() override;
  void update(int arm, double reward) override;
  int recommend() const override;

 private:
  void advance_phases();
  std::int64_t phase_target(int phase) const;
  std::int64_t budget_;
  double logbar_;
  std::vector<bool> active_;
  int phase_ = 1;
  std::int64_t target_ = 1;
};

// Sequential Halving: ⌈log₂K⌉ phases of ⌊T/(|S_r|⌈log₂K⌉)⌋ pulls per active
// arm; keeps the top ⌈|S_r|/2⌉ by phase-local means and drops observations
// between phases. Recommendation is the survivor chain (lowest index before
// the first phase completes).
class ShSampler : public Sampler {
 public:
  ShSampler(int K, std::int64_t budget);
  int select() override;
  void update(int arm, double reward) override;
  int recommend() const override { return rec_; }

 private:
  void start_phase();
  void finish_phase();
  std::int64_t budget_;
  int total_phases_;
  int phase_ = 1;
  std::int64_t per_arm_ = 1;
  std::vector<bool> active_;
  std::vector<std::int64_t> phase_counts_;
  std::vector<double> phase_sums_;
  int rec_ = 0;
  bool done_ = false;
};

// Doubling wrapper turning a fixed-budget rule into an anytime one:
// T_1 = 2K⌈log₂K⌉, T_{k+1} = 2T_k, fresh inner instance per segment, and the
// recommendation of the last completed instance in between (lowest index
// before the first completes).
class DoublingSampler : public Sampler {
 public:
  enum class Inner { Sr, Sh };
  DoublingSampler(int K, Inner inner);
  int select() override { return inner_->select(); }
  void update(int arm, double reward) override;
  int recommend() const override { return rec_; }
  std::int64_t segment_budget() const { return budget_; }

 private:
  std::unique_ptr<Sampler> make_inner() const;
  Inner kind_;
  std::int64_t budget_;
  std::int64_t used_ = 0;
  std::unique_ptr<Sampler> inner_;
  int rec_ = 0;
};

// Algorithm configuration as it appears in configs and on the CLI.
struct AlgoSpec {
  std::string name;
  std::string label;           // CSV/summary label; defaults to name
  std::optional<double> eps0;  // slack; defaults to the task epsilon
  double beta = 0.5;           // fixed proportion / leader-coin probability
  double alpha = 0.5;          // slack-schedule exponent
  double g_coef = 2.0;         // TTUCB bonus coefficient

  const std::string& display() const { return label.empty() ? name : label; }
};

const std::vector<std::string>& algo_names();
bool algo_known(const std::string& name);
// Multiplicative samplers pair with the multiplicative GLR rule and good set.
bool algo_is_multiplicative(const std::string& name);
// Fixed-budget rules need an explicit sampling budget (cap or horizon).
bool algo_uses_budget(const std::string& name);

// task_eps resolves the slack when spec.eps0 is absent; threshold feeds LUCB;
// budget feeds SR/SH; coin is the dedicated stream for randomized rules.
std::unique_ptr<Sampler> make_sampler(const AlgoSpec& spec, int K, double task_eps,
                                      const std::optional<ThresholdKind>& threshold,
                                      std::int64_t budget, const Rng& coin);

}  // namespace purex
