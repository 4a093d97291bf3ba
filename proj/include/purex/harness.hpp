#pragma once

/*
  Deterministic Monte-Carlo engine.

  A run is identified by (config, run_id): run i draws rewards from stream 0
  and algorithm coins from stream 1 of Rng(base_seed + i). Fixed-confidence
  runs iterate select/sample/update and test the matching stopping rule (the
  GLR of the sampler's cost family, or LUCB's own rule) after every sample
  from n > K on; τ is the number of samples consumed when the rule fires, or
  the cap for truncated runs. Anytime runs never stop and record the
  recommendation, its simple regret μ⋆ − μ_rec, and per-ε error indicators at
  each checkpoint.

  Batches fan runs out across a worker pool into preallocated slots, so the
  persisted CSV bytes are independent of the worker count (wall_ns excepted).
*/

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "purex/instances.hpp"
#include "purex/rng.hpp"
#include "purex/sampling.hpp"
#include "purex/thresholds.hpp"

namespace purex {

// Filesystem failures carry the offending path; the CLI maps these to exit 3.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunRecord {
  int run_id = 0;
  std::uint64_t seed = 0;
  std::int64_t tau = 0;
  bool truncated = false;
  int recommended = 0;  // 0-based internally; rendered 1-based in CSV
  bool correct = false;
  std::int64_t wall_ns = 0;
};

struct AnytimeTrace {
  std::vector<std::int64_t> checkpoints;
  std::vector<int> recommendations;
  std::vector<double> regrets;            // μ⋆ − μ_rec per checkpoint
  std::vector<double> eps_grid;           // caller-supplied error levels
  std::vector<std::vector<int>> eps_errors;  // [checkpoint][level] ∈ {0,1}
  double cumulative_regret = 0.0;         // Σ_{n>K} (μ⋆ − μ_rec(n)) up to the horizon
};

struct SummaryRow {
  std::string metric;  // "<algo>.<quantity>"
  double mean = 0.0;
  double std = 0.0;
  double q25 = 0.0;
  double q50 = 0.0;
  double q75 = 0.0;
  int n = 0;
};

struct BenchConfig {
  std::string experiment;  // "fc" | "anytime"
  InstanceSpec instance;
  std::vector<AlgoSpec> algos;
  double epsilon = 0.0;
  double delta = 0.01;
  std::string threshold = "heuristic";  // "heuristic" | "proven"
  int runs = 100;
  std::uint64_t base_seed = 1;
  std::int64_t cap = 10'000'000;  // fc only
  std::int64_t horizon = 0;       // anytime only
  std::vector<std::int64_t> checkpoints;
  std::string checkpoint_preset = "log";  // used when checkpoints is empty
  int workers = 1;
  std::string out;  // output directory

  // Throws std::invalid_argument on schema violations, IoError on unreadable files.
  static BenchConfig parse_json(const std::string& text);
  static BenchConfig parse_file(const std::string& path);
};

// Parses the "instance" object of a config given as standalone JSON text.
InstanceSpec parse_instance_spec(const std::string& text);

struct BenchResult {
  std::vector<SummaryRow> summary;
  std::string csv_path;
  std::string summary_path;
};

double sample_reward(const BanditInstance& instance, int arm, Rng& rng);

RunRecord run_fixed_confidence(const AlgoSpec& algo, const BanditInstance& instance, double eps,
                               const ThresholdKind& kind, std::uint64_t seed, std::int64_t cap,
                               int run_id = 0);

// Checkpoints must be strictly increasing within (K, horizon]. The optional
// threshold only feeds samplers that need one (LUCB) when run anytime.
AnytimeTrace run_anytime(const AlgoSpec& algo, const BanditInstance& instance,
                         std::int64_t horizon, const std::vector<std::int64_t>& checkpoints,
                         std::uint64_t seed, const std::vector<double>& eps_grid = {},
                         const std::optional<ThresholdKind>& threshold = std::nullopt);

// Batch helpers used by monte_carlo and the acceptance suite. Run i uses seed
// base_seed + i; results come back indexed by run_id regardless of workers.
std::vector<RunRecord> run_fc_batch(const AlgoSpec& algo, const BanditInstance& instance,
                                    double eps, const ThresholdKind& kind,
                                    std::uint64_t base_seed, int runs, std::int64_t cap,
                                    int workers);
std::vector<AnytimeTrace> run_anytime_batch(const AlgoSpec& algo, const BanditInstance& instance,
                                            std::int64_t horizon,
                                            const std::vector<std::int64_t>& checkpoints,
                                            std::uint64_t base_seed, int runs, int workers,
                                            const std::vector<double>& eps_grid = {},
                                            const std::optional<ThresholdKind>& threshold =
                                                std::nullopt);

// Full benchmark: validates the config, executes all algorithms, writes the
// per-run CSV and the summary file under config.out, and returns the summary.
BenchResult monte_carlo(const BenchConfig& config);

// "log": geometric from K+1 with ratio 1.2, rounded and deduplicated, ending
// at the horizon. "linear": 50 evenly spaced values over (K, horizon].
std::vector<std::int64_t> checkpoint_grid(const std::string& preset, int K, std::int64_t horizon);

double mean_of(const std::vector<double>& xs);
double sd_of(const std::vector<double>& xs);          // sample sd, 0 when n < 2
double quantile_of(std::vector<double> xs, double p);  // linear interpolation

}  // namespace purex
