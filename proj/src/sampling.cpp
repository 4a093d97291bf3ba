#include "purex/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "purex/oracle.hpp"

namespace purex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_pulled(const ArmStatistics& stats) {
  for (int i = 0; i < stats.K(); ++i) {
    if (stats.counts[i] < 1) throw std::invalid_argument("arm not yet pulled");
  }
}

}  // namespace

TrackSpec TrackSpec::fixed(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("tracking beta must lie in (0,1)");
  TrackSpec t;
  t.kind = Kind::FixedBeta;
  t.beta = beta;
  return t;
}

TrackSpec TrackSpec::ids() {
  TrackSpec t;
  t.kind = Kind::IDS;
  return t;
}

TrackSpec TrackSpec::ids_multiplicative(double eps0) {
  if (!(eps0 >= 0.0 && eps0 < 1.0)) {
    throw std::invalid_argument("multiplicative slack must lie in [0,1)");
  }
  TrackSpec t;
  t.kind = Kind::IDSMultiplicative;
  t.eps0 = eps0;
  return t;
}

double SlackSchedule::eps_at(std::int64_t n) const {
  const double nn = static_cast<double>(n);
  if (kind == Kind::PolyHalf) return std::pow(nn, -alpha / 2.0);
  const double ln = std::log(nn);
  if (ln <= 1.0) return 1.0;
  return std::min(1.0, std::pow(ln, -alpha / 2.0));
}

int eb_leader(const ArmStatistics& stats) {
  require_pulled(stats);
  int best = 0;
  for (int i = 1; i < stats.K(); ++i) {
    if (stats.mean(i) > stats.mean(best)) best = i;
  }
  return best;
}

int tc_challenger(const ArmStatistics& stats, int leader, double eps0) {
  require_pulled(stats);
  const double mu_b = stats.mean(leader);
  const double inv_nb = 1.0 / static_cast<double>(stats.counts[leader]);
  int pick = -1;
  double best = kInf;
  for (int i = 0; i < stats.K(); ++i) {
    if (i == leader) continue;
    const double cost =
        (mu_b - stats.mean(i) + eps0) /
        std::sqrt(inv_nb + 1.0 / static_cast<double>(stats.counts[i]));
    if (cost < best) {
      best = cost;
      pick = i;
    }
  }
  return pick;
}

int tcm_challenger(const ArmStatistics& stats, int leader, double eps0) {
  require_pulled(stats);
  const double mu_b = stats.mean(leader);
  const double inv_nb = 1.0 / static_cast<double>(stats.counts[leader]);
  const double shrink = 1.0 - eps0;
  int pick = -1;
  double best = kInf;
  for (int i = 0; i < stats.K(); ++i) {
    if (i == leader) continue;
    const double cost =
        (mu_b - shrink * stats.mean(i)) /
        std::sqrt(inv_nb + shrink * shrink / static_cast<double>(stats.counts[i]));
    if (cost < best) {
      best = cost;
      pick = i;
    }
  }
  return pick;
}

int tracking_select(TrackingTable& table, int leader, int challenger, const TrackSpec& mode,
                    const ArmStatistics& stats) {
  if (leader == challenger) throw std::invalid_argument("leader and challenger must differ");
  double beta_n = 0.5;
  switch (mode.kind) {
    case TrackSpec::Kind::FixedBeta:
      beta_n = mode.beta;
      break;
    case TrackSpec::Kind::IDS: {
      const double nb = static_cast<double>(stats.counts[leader]);
      const double nc = static_cast<double>(stats.counts[challenger]);
      beta_n = nc / (nb + nc);
      break;
    }
    case TrackSpec::Kind::IDSMultiplicative: {
      const double nb = static_cast<double>(stats.counts[leader]);
      const double nc = static_cast<double>(stats.counts[challenger]);
      const double s = (1.0 - mode.eps0) * (1.0 - mode.eps0);
      beta_n = nc / (s * nb + nc);
      break;
    }
  }
  const int at = leader * table.K + challenger;
  const double t_next = static_cast<double>(table.pair_counts[at] + 1);
  table.beta_bar[at] =
      (static_cast<double>(table.pair_counts[at]) * table.beta_bar[at] + beta_n) / t_next;
  table.pair_counts[at] += 1;
  if (static_cast<double>(table.challenger_pulls[at]) <= (1.0 - table.beta_bar[at]) * t_next) {
    table.challenger_pulls[at] += 1;
    return challenger;
  }
  return leader;
}

TopTwoSampler::TopTwoSampler(int K, Cost cost, TrackSpec track, double eps0)
    : Sampler(K), cost_(cost), track_(track), eps0_(eps0), table_(K) {
  if (eps0 < 0.0) throw std::invalid_argument("slack must be nonnegative");
  if (cost == Cost::Multiplicative && eps0 >= 1.0) {
    throw std::invalid_argument("multiplicative slack must lie in [0,1)");
  }
}

TopTwoSampler::TopTwoSampler(int K, TrackSpec track, SlackSchedule schedule)
    : Sampler(K), cost_(Cost::Additive), track_(track), schedule_(schedule), table_(K) {
  if (!(schedule.alpha > 0.0)) throw std::invalid_argument("slack exponent must be positive");
}

int TopTwoSampler::select() {
  if (in_init()) return init_arm();
  const int leader = eb_leader(stats_);
  const double eps = schedule_ ? schedule_->eps_at(stats_.step) : eps0_;
  const int challenger = cost_ == Cost::Multiplicative ? tcm_challenger(stats_, leader, eps)
                                                       : tc_challenger(stats_, leader, eps);
  return tracking_select(table_, leader, challenger, track_, stats_);
}

LucbSampler::LucbSampler(int K, double eps, ThresholdKind kind)
    : Sampler(K), eps_(eps), kind_(std::move(kind)) {
  if (eps < 0.0) throw std::invalid_argument("slack must be nonnegative");
}

double LucbSampler::bonus(double c, int i) const {
  return std::sqrt(2.0 * c / static_cast<double>(stats_.counts[i]));
}

int LucbSampler::select() {
  if (in_init()) return init_arm();
  if (pending_) {
    const int arm = *pending_;
    pending_.reset();
    return arm;
  }
  const int ihat = eb_leader(stats_);
  // Indices at n consumed samples use c(n-1). The clamp covers the first
  // post-init round at K = 2, where every count is 1 and the competitor
  // choice does not depend on c.
  const double c = kind_.value(std::max<std::int64_t>(2, stats_.step - 2));
  int comp = -1;
  double best = -kInf;
  for (int i = 0; i < stats_.K(); ++i) {
    if (i == ihat) continue;
    const double u = stats_.mean(i) + bonus(c, i);
    if (u > best) {
      best = u;
      comp = i;
    }
  }
  pending_ = comp;
  return ihat;
}

bool LucbSampler::wants_stop() const {
  // Checked at logical-round boundaries only: a started pair is finished.
  if (in_init() || pending_) return false;
  const int ihat = eb_leader(stats_);
  const double c = kind_.value(std::max<std::int64_t>(2, stats_.step - 2));
  double top = -kInf;
  for (int i = 0; i < stats_.K(); ++i) {
    if (i != ihat) top = std::max(top, stats_.mean(i) + bonus(c, i));
  }
  return stats_.mean(ihat) - bonus(c, ihat) + eps_ >= top;
}

T3cSampler::T3cSampler(int K, double eps, double beta, const Rng& coin)
    : Sampler(K), eps_(eps), beta_(beta), coin_(coin) {
  if (eps < 0.0) throw std::invalid_argument("slack must be nonnegative");
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in (0,1]");
}

int T3cSampler::select() {
  if (in_init()) return init_arm();
  int leader = 0;
  double best = -kInf;
  for (int i = 0; i < stats_.K(); ++i) {
    const double theta =
        stats_.mean(i) + coin_.next_gaussian() / std::sqrt(static_cast<double>(stats_.counts[i]));
    if (theta > best) {
      best = theta;
      leader = i;
    }
  }
  const int challenger = tc_challenger(stats_, leader, eps_);
  return coin_.next_bernoulli(beta_) ? leader : challenger;
}

EbTciSampler::EbTciSampler(int K, double eps, double beta, const Rng& coin)
    : Sampler(K), eps_(eps), beta_(beta), coin_(coin) {
  if (eps < 0.0) throw std::invalid_argument("slack must be nonnegative");
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in (0,1]");
}

int EbTciSampler::select() {
  if (in_init()) return init_arm();
  const int leader = eb_leader(stats_);
  const double mu_b = stats_.mean(leader);
  const double inv_nb = 1.0 / static_cast<double>(stats_.counts[leader]);
  int challenger = -1;
  double best = kInf;
  for (int i = 0; i < stats_.K(); ++i) {
    if (i == leader) continue;
    const double ni = static_cast<double>(stats_.counts[i]);
    double cost = std::log(ni);
    if (mu_b > stats_.mean(i)) {
      const double d = mu_b - stats_.mean(i) + eps_;
      cost += d * d / (2.0 * (inv_nb + 1.0 / ni));
    }
    if (cost < best) {
      best = cost;
      challenger = i;
    }
  }
  return coin_.next_bernoulli(beta_) ? leader : challenger;
}

TtucbSampler::TtucbSampler(int K, double eps, double g_coef)
    : Sampler(K), eps_(eps), g_coef_(g_coef), leader_rounds_(K, 0), self_pulls_(K, 0) {
  if (eps < 0.0) throw std::invalid_argument("slack must be nonnegative");
  if (!(g_coef > 0.0)) throw std::invalid_argument("bonus coefficient must be positive");
}

int TtucbSampler::select() {
  if (in_init()) return init_arm();
  const double g = g_coef_ * std::log1p(static_cast<double>(stats_.step));
  int leader = 0;
  double best = -kInf;
  for (int i = 0; i < stats_.K(); ++i) {
    const double u = stats_.mean(i) + std::sqrt(g / static_cast<double>(stats_.counts[i]));
    if (u > best) {
      best = u;
      leader = i;
    }
  }
  const int challenger = tc_challenger(stats_, leader, eps_);
  leader_rounds_[leader] += 1;  // Σ_i T_{n+1}(leader, i)
  if (static_cast<double>(self_pulls_[leader]) <= 0.5 * static_cast<double>(leader_rounds_[leader])) {
    self_pulls_[leader] += 1;
    return leader;
  }
  return challenger;
}

TasSampler::TasSampler(int K, double eps) : Sampler(K), eps_(eps), weight_sums_(K, 0.0) {
  if (eps < 0.0) throw std::invalid_argument("slack must be nonnegative");
}

int TasSampler::select() {
  if (in_init()) return init_arm();
  const int k = stats_.K();
  std::vector<double> means(k);
  for (int i = 0; i < k; ++i) means[i] = stats_.mean(i);
  std::vector<double> w;
  try {
    w = solve_eps(means, eps_).weights;
  } catch (const std::exception&) {
    // Non-unique empirical best arm (initialization ties): uniform round.
    w.assign(k, 1.0 / static_cast<double>(k));
  }
  for (int i = 0; i < k; ++i) weight_sums_[i] += w[i];

  int least = 0;
  for (int i = 1; i < k; ++i) {
    if (stats_.counts[i] < stats_.counts[least]) least = i;
  }
  const double n = static_cast<double>(stats_.step);
  if (static_cast<double>(stats_.counts[least]) < std::sqrt(n) - static_cast<double>(k) / 2.0) {
    return least;
  }
  int pick = 0;
  double gap = -kInf;
  for (int i = 0; i < k; ++i) {
    const double d = weight_sums_[i] - static_cast<double>(stats_.counts[i]);
    if (d > gap) {
      gap = d;
      pick = i;
    }
  }
  return pick;
}

SrSampler::SrSampler(int K, std::int64_t budget)
    : Sampler(K), budget_(budget), active_(K, true) {
  if (budget <= K) throw std::invalid_argument("budget must exceed K");
  logbar_ = 0.5;
  for (int i = 2; i <= K; ++i) logbar_ += 1.0 / static_cast<double>(i);
  target_ = phase_target(1);
}

std::int64_t SrSampler::phase_target(int phase) const {
  const double raw = static_cast<double>(budget_ - stats_.K()) /
                     (logbar_ * static_cast<double>(stats_.K() + 1 - phase));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(raw)));
}

void SrSampler::advance_phases() {
  const int k = stats_.K();
  while (phase_ <= k - 1) {
    target_ = phase_target(phase_);
    bool pending = false;
    for (int i = 0; i < k && !pending; ++i) {
      if (active_[i] && stats_.counts[i] < target_) pending = true;
    }
    if (pending) break;
    int worst = -1;
    for (int i = 0; i < k; ++i) {
      if (active_[i] && (worst < 0 || stats_.mean(i) < stats_.mean(worst))) worst = i;
    }
    active_[worst] = false;
    phase_ += 1;
  }
}

int SrSampler::select() {
  if (in_init()) return init_arm();
  int pick = -1;
  for (int i = 0; i < stats_.K(); ++i) {
    if (active_[i] && stats_.counts[i] < target_ &&
        (pick < 0 || stats_.counts[i] < stats_.counts[pick])) {
      pick = i;
    }
  }
  // Past the schedule (budget rounds left over): idle on the recommendation.
  return pick >= 0 ? pick : recommend();
}

void SrSampler::update(int arm, double reward) {
  Sampler::update(arm, reward);
  if (!in_init()) advance_phases();
}

int SrSampler::recommend() const {
  int best = -1;
  for (int i = 0; i < stats_.K(); ++i) {
    if (active_[i] && (best < 0 || stats_.mean(i) > stats_.mean(best))) best = i;
  }
  return best;
}

ShSampler::ShSampler(int K, std::int64_t budget)
    : Sampler(K), budget_(budget), active_(K, true), phase_counts_(K, 0), phase_sums_(K, 0.0) {
  if (budget < K) throw std::invalid_argument("budget must be at least K");
  total_phases_ = static_cast<int>(std::ceil(std::log2(static_cast<double>(K))));
  total_phases_ = std::max(total_phases_, 1);
  start_phase();
}

void ShSampler::start_phase() {
  std::int64_t live = 0;
  for (bool a : active_) live += a ? 1 : 0;
  per_arm_ = std::max<std::int64_t>(
      1, budget_ / (live * static_cast<std::int64_t>(total_phases_)));
  std::fill(phase_counts_.begin(), phase_counts_.end(), 0);
  std::fill(phase_sums_.begin(), phase_sums_.end(), 0.0);
}

void ShSampler::finish_phase() {
  const int k = stats_.K();
  std::vector<int> live;
  for (int i = 0; i < k; ++i) {
    if (active_[i]) live.push_back(i);
  }
  // Rank by phase-local mean, lowest index on ties; keep the top half.
  std::stable_sort(live.begin(), live.end(), [&](int a, int b) {
    return phase_sums_[a] / static_cast<double>(phase_counts_[a]) >
           phase_sums_[b] / static_cast<double>(phase_counts_[b]);
  });
  const std::size_t keep = (live.size() + 1) / 2;
  for (std::size_t r = keep; r < live.size(); ++r) active_[live[r]] = false;
  rec_ = live[0];
  phase_ += 1;
  if (keep <= 1 || phase_ > total_phases_) {
    done_ = true;
    return;
  }
  start_phase();
}

int ShSampler::select() {
  if (done_) return rec_;
  int pick = -1;
  for (int i = 0; i < stats_.K(); ++i) {
    if (active_[i] && phase_counts_[i] < per_arm_ &&
        (pick < 0 || phase_counts_[i] < phase_counts_[pick])) {
      pick = i;
    }
  }
  return pick >= 0 ? pick : rec_;
}

void ShSampler::update(int arm, double reward) {
  Sampler::update(arm, reward);
  if (done_ || !active_[arm]) return;
  phase_counts_[arm] += 1;
  phase_sums_[arm] += reward;
  for (int i = 0; i < stats_.K(); ++i) {
    if (active_[i] && phase_counts_[i] < per_arm_) return;
  }
  finish_phase();
}

DoublingSampler::DoublingSampler(int K, Inner inner) : Sampler(K), kind_(inner) {
  const auto phases = static_cast<std::int64_t>(
      std::max(1.0, std::ceil(std::log2(static_cast<double>(K)))));
  budget_ = 2 * static_cast<std::int64_t>(K) * phases;
  inner_ = make_inner();
}

std::unique_ptr<Sampler> DoublingSampler::make_inner() const {
  if (kind_ == Inner::Sr) return std::make_unique<SrSampler>(stats_.K(), budget_);
  return std::make_unique<ShSampler>(stats_.K(), budget_);
}

void DoublingSampler::update(int arm, double reward) {
  Sampler::update(arm, reward);
  inner_->update(arm, reward);
  used_ += 1;
  if (used_ == budget_) {
    rec_ = inner_->recommend();
    budget_ *= 2;
    used_ = 0;
    inner_ = make_inner();
  }
}

const std::vector<std::string>& algo_names() {
  static const std::vector<std::string> names = {
      "ebtc-ids", "ebtc-fixed", "ebtcm-ids", "ebtc-slack-poly", "ebtc-slack-log",
      "uniform",  "lucb",       "t3c",       "ebtci",           "ttucb",
      "tas",      "sr",         "sh",        "dsr",             "dsh"};
  return names;
}

bool algo_known(const std::string& name) {
  const auto& names = algo_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

bool algo_is_multiplicative(const std::string& name) { return name == "ebtcm-ids"; }

bool algo_uses_budget(const std::string& name) { return name == "sr" || name == "sh"; }

std::unique_ptr<Sampler> make_sampler(const AlgoSpec& spec, int K, double task_eps,
                                      const std::optional<ThresholdKind>& threshold,
                                      std::int64_t budget, const Rng& coin) {
  if (K < 2) throw std::invalid_argument("samplers require K >= 2");
  const double slack = spec.eps0.value_or(task_eps);
  const std::string& n = spec.name;
  if (n == "ebtc-ids") {
    return std::make_unique<TopTwoSampler>(K, TopTwoSampler::Cost::Additive, TrackSpec::ids(),
                                           slack);
  }
  if (n == "ebtc-fixed") {
    return std::make_unique<TopTwoSampler>(K, TopTwoSampler::Cost::Additive,
                                           TrackSpec::fixed(spec.beta), slack);
  }
  if (n == "ebtcm-ids") {
    return std::make_unique<TopTwoSampler>(K, TopTwoSampler::Cost::Multiplicative,
                                           TrackSpec::ids_multiplicative(slack), slack);
  }
  if (n == "ebtc-slack-poly" || n == "ebtc-slack-log") {
    SlackSchedule sched;
    sched.kind = n == "ebtc-slack-poly" ? SlackSchedule::Kind::PolyHalf
                                        : SlackSchedule::Kind::LogHalf;
    sched.alpha = spec.alpha;
    return std::make_unique<TopTwoSampler>(K, TrackSpec::fixed(spec.beta), sched);
  }
  if (n == "uniform") return std::make_unique<UniformSampler>(K);
  if (n == "lucb") {
    if (!threshold) throw std::invalid_argument("lucb requires a threshold (delta)");
    return std::make_unique<LucbSampler>(K, task_eps, *threshold);
  }
  if (n == "t3c") return std::make_unique<T3cSampler>(K, slack, spec.beta, coin);
  if (n == "ebtci") return std::make_unique<EbTciSampler>(K, slack, spec.beta, coin);
  if (n == "ttucb") return std::make_unique<TtucbSampler>(K, slack, spec.g_coef);
  if (n == "tas") return std::make_unique<TasSampler>(K, slack);
  if (n == "sr") return std::make_unique<SrSampler>(K, budget);
  if (n == "sh") return std::make_unique<ShSampler>(K, budget);
  if (n == "dsr") return std::make_unique<DoublingSampler>(K, DoublingSampler::Inner::Sr);
  if (n == "dsh") return std::make_unique<DoublingSampler>(K, DoublingSampler::Inner::Sh);
  throw std::invalid_argument("unknown algorithm: " + n);
}

}  // namespace purex
