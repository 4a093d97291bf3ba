#include "purex/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "purex/stopping.hpp"

namespace purex {

namespace {

using nlohmann::json;

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Runs job(0..n_jobs-1) across a bounded pool; each job owns its output slot,
// so results are independent of scheduling.
template <typename Job>
void parallel_for(int n_jobs, int workers, Job&& job) {
  workers = std::max(1, std::min(workers, n_jobs));
  if (workers <= 1) {
    for (int i = 0; i < n_jobs; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mu;
  std::exception_ptr err;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= n_jobs) return;
        try {
          job(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

bool is_correct(const BanditInstance& instance, int arm, double eps, bool multiplicative) {
  const double star = instance.best_mean();
  if (multiplicative) return instance.means[arm] >= (1.0 - eps) * star;
  return instance.means[arm] >= star - eps;
}

void validate_multiplicative(const BanditInstance& instance, double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) {
    throw std::invalid_argument("multiplicative runs require epsilon in [0,1)");
  }
  for (double m : instance.means) {
    if (!(m > 0.0)) throw std::invalid_argument("multiplicative runs require positive means");
  }
}

}  // namespace

double sample_reward(const BanditInstance& instance, int arm, Rng& rng) {
  const double mu = instance.means[arm];
  if (instance.family == RewardFamily::BernoulliClamped) {
    return rng.next_bernoulli(mu) ? 1.0 : 0.0;
  }
  return mu + rng.next_gaussian();
}

RunRecord run_fixed_confidence(const AlgoSpec& algo, const BanditInstance& instance, double eps,
                               const ThresholdKind& kind, std::uint64_t seed, std::int64_t cap,
                               int run_id) {
  const int K = instance.K();
  if (cap <= K) throw std::invalid_argument("cap must exceed K");
  if (eps < 0.0) throw std::invalid_argument("epsilon must be nonnegative");
  const bool multiplicative = algo_is_multiplicative(algo.name);
  if (multiplicative) validate_multiplicative(instance, eps);

  const auto t0 = std::chrono::steady_clock::now();
  Rng rewards(seed, 0);
  const Rng coin(seed, 1);
  auto sampler = make_sampler(algo, K, eps, kind, cap, coin);

  RunRecord rec;
  rec.run_id = run_id;
  rec.seed = seed;
  std::int64_t s = 0;
  while (true) {
    if (s > K) {
      const bool stop = sampler->uses_internal_stop()
                            ? sampler->wants_stop()
                            : (multiplicative
                                   ? glr_check_multiplicative(sampler->stats(), eps, kind).stop
                                   : glr_check(sampler->stats(), eps, kind).stop);
      if (stop) {
        rec.tau = s;
        break;
      }
    }
    if (s >= cap) {
      rec.tau = cap;
      rec.truncated = true;
      break;
    }
    const int arm = sampler->select();
    sampler->update(arm, sample_reward(instance, arm, rewards));
    ++s;
  }
  rec.recommended = sampler->recommend();
  rec.correct = is_correct(instance, rec.recommended, eps, multiplicative);
  rec.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return rec;
}

AnytimeTrace run_anytime(const AlgoSpec& algo, const BanditInstance& instance,
                         std::int64_t horizon, const std::vector<std::int64_t>& checkpoints,
                         std::uint64_t seed, const std::vector<double>& eps_grid,
                         const std::optional<ThresholdKind>& threshold) {
  const int K = instance.K();
  if (horizon <= K) throw std::invalid_argument("horizon must exceed K");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    const bool ordered = i == 0 || checkpoints[i] > checkpoints[i - 1];
    if (!ordered || checkpoints[i] <= K || checkpoints[i] > horizon) {
      throw std::invalid_argument("checkpoints must be strictly increasing within (K, horizon]");
    }
  }

  Rng rewards(seed, 0);
  const Rng coin(seed, 1);
  auto sampler = make_sampler(algo, K, /*task_eps=*/0.0, threshold, horizon, coin);

  AnytimeTrace tr;
  tr.checkpoints = checkpoints;
  tr.eps_grid = eps_grid;
  const double star = instance.best_mean();
  std::size_t ci = 0;
  for (std::int64_t s = 1; s <= horizon; ++s) {
    const int arm = sampler->select();
    sampler->update(arm, sample_reward(instance, arm, rewards));
    if (s <= K) continue;
    const int rec = sampler->recommend();
    tr.cumulative_regret += star - instance.means[rec];
    if (ci < checkpoints.size() && s == checkpoints[ci]) {
      tr.recommendations.push_back(rec);
      tr.regrets.push_back(star - instance.means[rec]);
      if (!eps_grid.empty()) {
        std::vector<int> errs;
        errs.reserve(eps_grid.size());
        for (double e : eps_grid) {
          errs.push_back(instance.means[rec] >= star - e ? 0 : 1);
        }
        tr.eps_errors.push_back(std::move(errs));
      }
      ++ci;
    }
  }
  return tr;
}

std::vector<RunRecord> run_fc_batch(const AlgoSpec& algo, const BanditInstance& instance,
                                    double eps, const ThresholdKind& kind,
                                    std::uint64_t base_seed, int runs, std::int64_t cap,
                                    int workers) {
  if (runs < 1) throw std::invalid_argument("runs must be at least 1");
  std::vector<RunRecord> out(runs);
  parallel_for(runs, workers, [&](int i) {
    out[i] = run_fixed_confidence(algo, instance, eps, kind,
                                  base_seed + static_cast<std::uint64_t>(i), cap, i);
  });
  return out;
}

std::vector<AnytimeTrace> run_anytime_batch(const AlgoSpec& algo, const BanditInstance& instance,
                                            std::int64_t horizon,
                                            const std::vector<std::int64_t>& checkpoints,
                                            std::uint64_t base_seed, int runs, int workers,
                                            const std::vector<double>& eps_grid,
                                            const std::optional<ThresholdKind>& threshold) {
  if (runs < 1) throw std::invalid_argument("runs must be at least 1");
  std::vector<AnytimeTrace> out(runs);
  parallel_for(runs, workers, [&](int i) {
    out[i] = run_anytime(algo, instance, horizon, checkpoints,
                         base_seed + static_cast<std::uint64_t>(i), eps_grid, threshold);
  });
  return out;
}

std::vector<std::int64_t> checkpoint_grid(const std::string& preset, int K,
                                          std::int64_t horizon) {
  if (horizon <= K) throw std::invalid_argument("horizon must exceed K");
  std::vector<std::int64_t> out;
  if (preset == "log") {
    double x = static_cast<double>(K + 1);
    while (static_cast<std::int64_t>(std::llround(x)) < horizon) {
      out.push_back(std::llround(x));
      x *= 1.2;
    }
    out.push_back(horizon);
  } else if (preset == "linear") {
    const int points = 50;
    for (int i = 1; i <= points; ++i) {
      out.push_back(K + (horizon - K) * i / points);
    }
  } else {
    throw std::invalid_argument("unknown checkpoint preset: " + preset);
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sd_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

double quantile_of(std::vector<double> xs, double p) {
  if (xs.empty()) return 0.0;
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile level must lie in [0,1]");
  std::sort(xs.begin(), xs.end());
  const double h = p * static_cast<double>(xs.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= xs.size()) return xs.back();
  return xs[lo] + (h - static_cast<double>(lo)) * (xs[lo + 1] - xs[lo]);
}

namespace {

SummaryRow summarize(const std::string& metric, const std::vector<double>& xs) {
  SummaryRow row;
  row.metric = metric;
  row.mean = mean_of(xs);
  row.std = sd_of(xs);
  row.q25 = quantile_of(xs, 0.25);
  row.q50 = quantile_of(xs, 0.50);
  row.q75 = quantile_of(xs, 0.75);
  row.n = static_cast<int>(xs.size());
  return row;
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw std::invalid_argument("unknown key '" + it.key() + "' in " + where);
    }
  }
}

InstanceSpec parse_instance(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("instance must be an object");
  reject_unknown(j,
                 {"kind", "family", "K", "alpha", "n_best", "high", "low", "eps", "n_good",
                  "seed", "means"},
                 "instance");
  InstanceSpec spec;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "alpha") {
    spec.kind = InstanceSpec::Kind::Alpha;
  } else if (kind == "sparse") {
    spec.kind = InstanceSpec::Kind::Sparse;
  } else if (kind == "two-groups") {
    spec.kind = InstanceSpec::Kind::TwoGroups;
  } else if (kind == "random-eps-good") {
    spec.kind = InstanceSpec::Kind::RandomEpsGood;
  } else if (kind == "explicit") {
    spec.kind = InstanceSpec::Kind::Explicit;
  } else {
    throw std::invalid_argument("unknown instance kind: " + kind);
  }
  if (j.contains("family")) {
    const std::string fam = j.at("family").get<std::string>();
    if (fam == "gaussian") {
      spec.family = RewardFamily::GaussianUnitVariance;
    } else if (fam == "bernoulli") {
      spec.family = RewardFamily::BernoulliClamped;
    } else {
      throw std::invalid_argument("unknown reward family: " + fam);
    }
  }
  if (j.contains("K")) spec.K = j.at("K").get<int>();
  if (j.contains("alpha")) spec.alpha = j.at("alpha").get<double>();
  if (j.contains("n_best")) spec.n_best = j.at("n_best").get<int>();
  if (j.contains("high")) spec.high = j.at("high").get<double>();
  if (j.contains("low")) spec.low = j.at("low").get<double>();
  if (j.contains("eps")) spec.eps = j.at("eps").get<double>();
  if (j.contains("n_good")) spec.n_good = j.at("n_good").get<int>();
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("means")) spec.means = j.at("means").get<std::vector<double>>();
  if (spec.kind == InstanceSpec::Kind::Explicit) {
    spec.K = static_cast<int>(spec.means.size());
  }
  return spec;
}

AlgoSpec parse_algo(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("algo must be an object");
  reject_unknown(j, {"name", "label", "eps0", "beta", "alpha", "g_coef"}, "algo");
  AlgoSpec spec;
  spec.name = j.at("name").get<std::string>();
  if (!algo_known(spec.name)) throw std::invalid_argument("unknown algorithm: " + spec.name);
  if (j.contains("label")) spec.label = j.at("label").get<std::string>();
  if (j.contains("eps0")) spec.eps0 = j.at("eps0").get<double>();
  if (j.contains("beta")) spec.beta = j.at("beta").get<double>();
  if (j.contains("alpha")) spec.alpha = j.at("alpha").get<double>();
  if (j.contains("g_coef")) spec.g_coef = j.at("g_coef").get<double>();
  return spec;
}

}  // namespace

InstanceSpec parse_instance_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("instance parse error: ") + e.what());
  }
  try {
    return parse_instance(j);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("instance error: ") + e.what());
  }
}

BenchConfig BenchConfig::parse_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  try {
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    reject_unknown(j,
                   {"experiment", "instance", "algo", "epsilon", "delta", "threshold", "runs",
                    "base_seed", "cap", "horizon", "checkpoints", "workers", "out"},
                   "config");
    BenchConfig c;
    c.experiment = j.at("experiment").get<std::string>();
    if (c.experiment != "fc" && c.experiment != "anytime") {
      throw std::invalid_argument("experiment must be \"fc\" or \"anytime\"");
    }
    c.instance = parse_instance(j.at("instance"));
    const json& algos = j.at("algo");
    if (algos.is_array()) {
      for (const json& a : algos) c.algos.push_back(parse_algo(a));
    } else {
      c.algos.push_back(parse_algo(algos));
    }
    if (c.algos.empty()) throw std::invalid_argument("algo list must not be empty");
    if (j.contains("epsilon")) c.epsilon = j.at("epsilon").get<double>();
    if (j.contains("delta")) c.delta = j.at("delta").get<double>();
    if (j.contains("threshold")) c.threshold = j.at("threshold").get<std::string>();
    if (j.contains("runs")) c.runs = j.at("runs").get<int>();
    if (c.runs < 1) throw std::invalid_argument("runs must be at least 1");
    if (j.contains("base_seed")) c.base_seed = j.at("base_seed").get<std::uint64_t>();
    if (j.contains("cap")) c.cap = j.at("cap").get<std::int64_t>();
    if (c.experiment == "anytime") {
      c.horizon = j.at("horizon").get<std::int64_t>();
    } else if (j.contains("horizon")) {
      throw std::invalid_argument("horizon is only valid for anytime experiments");
    }
    if (j.contains("checkpoints")) {
      const json& cp = j.at("checkpoints");
      if (cp.is_string()) {
        c.checkpoint_preset = cp.get<std::string>();
      } else {
        c.checkpoints = cp.get<std::vector<std::int64_t>>();
      }
    }
    if (j.contains("workers")) c.workers = j.at("workers").get<int>();
    if (c.workers < 1) throw std::invalid_argument("workers must be at least 1");
    if (j.contains("out")) c.out = j.at("out").get<std::string>();
    return c;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config error: ") + e.what());
  }
}

BenchConfig BenchConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str());
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

void write_summary_file(const std::string& path, const std::vector<SummaryRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const SummaryRow& r : rows) {
    nlohmann::ordered_json o;
    o["metric"] = r.metric;
    o["mean"] = r.mean;
    o["std"] = r.std;
    o["q25"] = r.q25;
    o["q50"] = r.q50;
    o["q75"] = r.q75;
    o["n"] = r.n;
    arr.push_back(std::move(o));
  }
  auto out = open_out(path);
  out << arr.dump(2) << "\n";
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace

BenchResult monte_carlo(const BenchConfig& config) {
  if (config.out.empty()) throw std::invalid_argument("config requires an output directory");
  const BanditInstance instance = generate_instance(config.instance);
  const int K = instance.K();
  const std::string tag = config.instance.tag();
  const ThresholdKind kind = ThresholdKind::parse(config.threshold, K, config.delta);

  std::error_code ec;
  std::filesystem::create_directories(config.out, ec);
  if (ec) throw IoError("cannot create output directory " + config.out + ": " + ec.message());
  const std::string sep = config.out.back() == '/' ? "" : "/";

  BenchResult res;
  res.summary_path = config.out + sep + "summary.json";

  if (config.experiment == "fc") {
    res.csv_path = config.out + sep + "fc.csv";
    auto csv = open_out(res.csv_path);
    csv << "run_id,seed,algo,instance_id,K,epsilon,delta,threshold,tau,truncated,"
           "recommended,correct,wall_ns\n";
    for (const AlgoSpec& algo : config.algos) {
      const auto records = run_fc_batch(algo, instance, config.epsilon, kind, config.base_seed,
                                        config.runs, config.cap, config.workers);
      std::vector<double> taus, errors;
      taus.reserve(records.size());
      errors.reserve(records.size());
      for (const RunRecord& r : records) {
        csv << r.run_id << ',' << r.seed << ',' << algo.display() << ',' << tag << ',' << K << ','
            << fmt_num(config.epsilon) << ',' << fmt_num(config.delta) << ',' << kind.name()
            << ',' << r.tau << ',' << (r.truncated ? 1 : 0) << ',' << r.recommended + 1 << ','
            << (r.correct ? 1 : 0) << ',' << r.wall_ns << '\n';
        taus.push_back(static_cast<double>(r.tau));
        errors.push_back(r.correct ? 0.0 : 1.0);
      }
      res.summary.push_back(summarize(algo.display() + ".tau", taus));
      res.summary.push_back(summarize(algo.display() + ".error", errors));
    }
    if (!csv) throw IoError("failed writing " + res.csv_path);
  } else if (config.experiment == "anytime") {
    const std::vector<std::int64_t> checkpoints =
        config.checkpoints.empty() ? checkpoint_grid(config.checkpoint_preset, K, config.horizon)
                                   : config.checkpoints;
    const std::vector<double> eps_grid = {config.epsilon};
    res.csv_path = config.out + sep + "anytime.csv";
    auto csv = open_out(res.csv_path);
    csv << "run_id,seed,algo,instance_id,t,recommended,regret\n";
    for (const AlgoSpec& algo : config.algos) {
      const auto traces = run_anytime_batch(algo, instance, config.horizon, checkpoints,
                                            config.base_seed, config.runs, config.workers,
                                            eps_grid, kind);
      std::vector<double> final_regret, final_error;
      final_regret.reserve(traces.size());
      final_error.reserve(traces.size());
      for (int i = 0; i < static_cast<int>(traces.size()); ++i) {
        const AnytimeTrace& tr = traces[i];
        for (std::size_t c = 0; c < tr.checkpoints.size(); ++c) {
          csv << i << ',' << config.base_seed + static_cast<std::uint64_t>(i) << ','
              << algo.display() << ',' << tag << ',' << tr.checkpoints[c] << ','
              << tr.recommendations[c] + 1 << ',' << fmt_num(tr.regrets[c]) << '\n';
        }
        final_regret.push_back(tr.regrets.back());
        final_error.push_back(static_cast<double>(tr.eps_errors.back().front()));
      }
      res.summary.push_back(summarize(algo.display() + ".regret_final", final_regret));
      res.summary.push_back(summarize(algo.display() + ".error_final", final_error));
    }
    if (!csv) throw IoError("failed writing " + res.csv_path);
  } else {
    throw std::invalid_argument("experiment must be \"fc\" or \"anytime\"");
  }

  write_summary_file(res.summary_path, res.summary);
  return res;
}

}  // namespace purex
