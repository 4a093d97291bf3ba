// Command-line front end: allocation oracle, single runs, batch benchmarks,
// and hardness constants. Exit codes: 0 success, 2 usage/validation, 3 I/O.

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "purex/harness.hpp"
#include "purex/instances.hpp"
#include "purex/oracle.hpp"
#include "purex/sampling.hpp"
#include "purex/thresholds.hpp"

namespace {

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string join12(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ", ";
    s += fmt12(xs[i]);
  }
  return s;
}

std::vector<double> parse_means_csv(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("invalid mean value: '" + item + "'");
    }
    while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
    if (pos != item.size()) throw std::invalid_argument("invalid mean value: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("--means must list at least one value");
  return out;
}

purex::BanditInstance resolve_instance(const std::string& means_csv,
                                       const std::string& instance_json) {
  if (means_csv.empty() == instance_json.empty()) {
    throw std::invalid_argument("provide exactly one of --means or --instance");
  }
  if (!means_csv.empty()) {
    purex::InstanceSpec spec;
    spec.kind = purex::InstanceSpec::Kind::Explicit;
    spec.means = parse_means_csv(means_csv);
    spec.K = static_cast<int>(spec.means.size());
    return purex::generate_instance(spec);
  }
  return purex::generate_instance(purex::parse_instance_spec(instance_json));
}

struct AlgoFlags {
  std::string name;
  std::optional<double> eps0;
  std::optional<double> beta;
  std::optional<double> alpha;
  std::optional<double> g_coef;
};

void add_algo_flags(CLI::App* cmd, AlgoFlags& f) {
  cmd->add_option("--algo", f.name, "algorithm name (see --help footer)")->required();
  cmd->add_option("--eps0", f.eps0, "algorithm slack (defaults to --eps)");
  cmd->add_option("--beta", f.beta, "fixed proportion / leader-coin probability");
  cmd->add_option("--alpha", f.alpha, "slack-schedule exponent");
  cmd->add_option("--g-coef", f.g_coef, "TTUCB bonus coefficient");
}

purex::AlgoSpec to_spec(const AlgoFlags& f) {
  if (!purex::algo_known(f.name)) throw std::invalid_argument("unknown algorithm: " + f.name);
  purex::AlgoSpec spec;
  spec.name = f.name;
  spec.eps0 = f.eps0;
  if (f.beta) spec.beta = *f.beta;
  if (f.alpha) spec.alpha = *f.alpha;
  if (f.g_coef) spec.g_coef = *f.g_coef;
  return spec;
}

std::vector<std::int64_t> parse_checkpoints(const std::string& text, int K,
                                            std::int64_t horizon) {
  if (text == "log" || text == "linear") return purex::checkpoint_grid(text, K, horizon);
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoll(item));
    } catch (const std::exception&) {
      throw std::invalid_argument("invalid checkpoint: '" + item + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument("--checkpoints must not be empty");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Pure-exploration bandits: lower-bound allocations, GLR-stopped runs, "
      "anytime traces, and deterministic Monte-Carlo benchmarks."};
  app.require_subcommand(1);
  std::string footer = "Algorithms:";
  for (const std::string& n : purex::algo_names()) footer += " " + n;
  app.footer(footer);

  struct {
    std::string means, instance;
    double eps = 0.0;
    std::optional<double> beta;
    bool multiplicative = false;
  } orc;
  auto* oracle_cmd =
      app.add_subcommand("oracle", "Optimal allocation and characteristic time");
  oracle_cmd->add_option("--means", orc.means, "comma-separated arm means");
  oracle_cmd->add_option("--instance", orc.instance, "instance spec as JSON");
  oracle_cmd->add_option("--eps", orc.eps, "slack (default 0)");
  oracle_cmd->add_option("--beta", orc.beta, "fix the best-arm proportion");
  oracle_cmd->add_flag("--multiplicative", orc.multiplicative,
                       "relative slack: good means mu_i >= (1-eps) mu*");

  struct {
    AlgoFlags algo;
    std::string means, instance;
    double eps = 0.0, delta = 0.01;
    std::string threshold = "heuristic";
    std::uint64_t seed = 1;
    std::int64_t cap = 10'000'000;
  } fc;
  auto* fc_cmd = app.add_subcommand("run-fc", "One fixed-confidence run with GLR stopping");
  add_algo_flags(fc_cmd, fc.algo);
  fc_cmd->add_option("--means", fc.means, "comma-separated arm means");
  fc_cmd->add_option("--instance", fc.instance, "instance spec as JSON");
  fc_cmd->add_option("--eps", fc.eps, "target slack (default 0)");
  fc_cmd->add_option("--delta", fc.delta, "confidence level (default 0.01)");
  fc_cmd->add_option("--threshold", fc.threshold, "heuristic|proven (default heuristic)");
  fc_cmd->add_option("--seed", fc.seed, "run seed (default 1)");
  fc_cmd->add_option("--cap", fc.cap, "sample cap marking truncation (default 1e7)");

  struct {
    AlgoFlags algo;
    std::string means, instance;
    std::int64_t horizon = 0;
    std::string checkpoints = "log";
    std::uint64_t seed = 1;
    double delta = 0.01;
    std::string threshold = "heuristic";
  } any;
  auto* any_cmd =
      app.add_subcommand("run-anytime", "One run without stopping; regret at checkpoints");
  add_algo_flags(any_cmd, any.algo);
  any_cmd->add_option("--means", any.means, "comma-separated arm means");
  any_cmd->add_option("--instance", any.instance, "instance spec as JSON");
  any_cmd->add_option("--horizon", any.horizon, "total samples")->required();
  any_cmd->add_option("--checkpoints", any.checkpoints, "log|linear|comma-separated rounds");
  any_cmd->add_option("--seed", any.seed, "run seed (default 1)");
  any_cmd->add_option("--delta", any.delta, "confidence level for index rules (default 0.01)");
  any_cmd->add_option("--threshold", any.threshold, "heuristic|proven (default heuristic)");

  std::string config_path;
  auto* bench_cmd = app.add_subcommand("bench", "Monte-Carlo benchmark from a JSON config");
  bench_cmd->add_option("config", config_path, "path to the config file")->required();

  struct {
    std::string means;
    double eps0 = 0.0;
    double eps_tilde = 0.0;
  } hard;
  auto* hard_cmd =
      app.add_subcommand("hardness", "Anytime error-rate constants of an instance");
  hard_cmd->add_option("--means", hard.means, "comma-separated arm means")->required();
  hard_cmd->add_option("--eps0", hard.eps0, "algorithm slack (> 0)")->required();
  hard_cmd->add_option("--eps-tilde", hard.eps_tilde, "error level (default 0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*oracle_cmd) {
      const purex::BanditInstance inst = resolve_instance(orc.means, orc.instance);
      const purex::Allocation a =
          orc.multiplicative ? purex::solve_eps_multiplicative(inst.means, orc.eps, orc.beta)
                             : purex::solve_eps(inst.means, orc.eps, orc.beta);
      std::cout << "{\"time\": " << fmt12(a.time) << ", \"weights\": [" << join12(a.weights)
                << "]}\n";
    } else if (*fc_cmd) {
      const purex::BanditInstance inst = resolve_instance(fc.means, fc.instance);
      const purex::ThresholdKind kind =
          purex::ThresholdKind::parse(fc.threshold, inst.K(), fc.delta);
      const purex::RunRecord rec =
          purex::run_fixed_confidence(to_spec(fc.algo), inst, fc.eps, kind, fc.seed, fc.cap);
      std::cout << "{\"tau\": " << rec.tau
                << ", \"truncated\": " << (rec.truncated ? "true" : "false")
                << ", \"recommended\": " << rec.recommended + 1
                << ", \"correct\": " << (rec.correct ? "true" : "false") << "}\n";
    } else if (*any_cmd) {
      const purex::BanditInstance inst = resolve_instance(any.means, any.instance);
      const auto cps = parse_checkpoints(any.checkpoints, inst.K(), any.horizon);
      const purex::ThresholdKind kind =
          purex::ThresholdKind::parse(any.threshold, inst.K(), any.delta);
      const purex::AnytimeTrace tr =
          purex::run_anytime(to_spec(any.algo), inst, any.horizon, cps, any.seed, {}, kind);
      std::cout << "{\"checkpoints\": [";
      for (std::size_t i = 0; i < tr.checkpoints.size(); ++i) {
        std::cout << (i ? ", " : "") << tr.checkpoints[i];
      }
      std::cout << "], \"recommended\": [";
      for (std::size_t i = 0; i < tr.recommendations.size(); ++i) {
        std::cout << (i ? ", " : "") << tr.recommendations[i] + 1;
      }
      std::cout << "], \"regret\": [" << join12(tr.regrets)
                << "], \"cumulative_regret\": " << fmt12(tr.cumulative_regret) << "}\n";
    } else if (*bench_cmd) {
      const purex::BenchConfig config = purex::BenchConfig::parse_file(config_path);
      const purex::BenchResult res = purex::monte_carlo(config);
      for (const purex::SummaryRow& r : res.summary) {
        std::cout << "{\"metric\": \"" << r.metric << "\", \"mean\": " << fmt12(r.mean)
                  << ", \"std\": " << fmt12(r.std) << ", \"q25\": " << fmt12(r.q25)
                  << ", \"q50\": " << fmt12(r.q50) << ", \"q75\": " << fmt12(r.q75)
                  << ", \"n\": " << r.n << "}\n";
      }
    } else if (*hard_cmd) {
      const std::vector<double> means = parse_means_csv(hard.means);
      if (means.size() < 2) throw std::invalid_argument("hardness requires K >= 2");
      const purex::HardnessConstants hc =
          purex::hardness_constants(means, hard.eps0, hard.eps_tilde);
      std::cout << "{\"h_eps\": " << fmt12(hc.h_eps) << ", \"h_levels\": ["
                << join12(hc.h_levels) << "]}\n";
    }
  } catch (const purex::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
