#include "purex/instances.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "purex/rng.hpp"

namespace purex {

double BanditInstance::best_mean() const {
  return *std::max_element(means.begin(), means.end());
}

int BanditInstance::best_arm() const {
  return static_cast<int>(std::max_element(means.begin(), means.end()) - means.begin());
}

namespace {

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

std::string InstanceSpec::tag() const {
  switch (kind) {
    case Kind::Alpha:
      return "alpha-K" + std::to_string(K) + "-a" + fmt_g(alpha);
    case Kind::Sparse:
      return "sparse-K" + std::to_string(K);
    case Kind::TwoGroups:
      return "twogroups-K" + std::to_string(K) + "-b" + std::to_string(n_best) +
             "-" + fmt_g(high) + "-" + fmt_g(low);
    case Kind::RandomEpsGood:
      return "randeps-K" + std::to_string(K) + "-e" + fmt_g(eps) + "-g" +
             std::to_string(n_good) + "-s" + std::to_string(seed);
    case Kind::Explicit:
      return "explicit-K" + std::to_string(means.size());
  }
  return "unknown";
}

BanditInstance generate_instance(const InstanceSpec& spec) {
  BanditInstance inst;
  inst.family = spec.family;
  switch (spec.kind) {
    case InstanceSpec::Kind::Alpha: {
      require(spec.K >= 2, "alpha instance requires K >= 2");
      require(spec.alpha > 0.0, "alpha instance requires alpha > 0");
      inst.means.resize(spec.K);
      for (int i = 0; i < spec.K; ++i) {
        inst.means[i] = 1.0 - std::pow(static_cast<double>(i) / (spec.K - 1), spec.alpha);
      }
      break;
    }
    case InstanceSpec::Kind::Sparse: {
      require(spec.K >= 2, "sparse instance requires K >= 2");
      inst.means.assign(spec.K, 0.0);
      inst.means[0] = 0.25;
      break;
    }
    case InstanceSpec::Kind::TwoGroups: {
      require(spec.K >= 2, "two-groups instance requires K >= 2");
      require(spec.n_best >= 1 && spec.n_best < spec.K, "two-groups: 1 <= n_best < K");
      require(spec.high > spec.low, "two-groups: high must exceed low");
      inst.means.assign(spec.K, spec.low);
      std::fill(inst.means.begin(), inst.means.begin() + spec.n_best, spec.high);
      break;
    }
    case InstanceSpec::Kind::RandomEpsGood: {
      require(spec.K >= 2, "random instance requires K >= 2");
      require(spec.eps > 0.0 && spec.eps < 1.0, "random instance requires 0 < eps < 1");
      require(spec.n_good >= 1 && spec.n_good < spec.K, "random instance: 1 <= n_good < K");
      inst.means.resize(spec.K);
      inst.means[0] = 1.0;
      Rng rng(spec.seed, /*stream=*/0x157ULL);
      for (int i = 1; i <= spec.n_good; ++i) {
        inst.means[i] = (1.0 - spec.eps) + spec.eps * rng.next_double();
      }
      for (int i = spec.n_good + 1; i < spec.K; ++i) {
        // The bad arms live in the half-open [0, 1−ε); rounding could land a
        // draw exactly on the endpoint, so reject it for determinism.
        double v;
        do {
          v = rng.next_double() * (1.0 - spec.eps);
        } while (v == 1.0 - spec.eps);
        inst.means[i] = v;
      }
      break;
    }
    case InstanceSpec::Kind::Explicit: {
      require(spec.means.size() >= 2, "explicit instance requires K >= 2");
      for (double m : spec.means) require(std::isfinite(m), "explicit instance: non-finite mean");
      inst.means = spec.means;
      break;
    }
  }
  if (inst.family == RewardFamily::BernoulliClamped) {
    for (double m : inst.means) {
      require(m >= 0.0 && m <= 1.0, "bernoulli family requires means in [0,1]");
    }
  }
  return inst;
}

std::vector<int> eps_good_set(const BanditInstance& inst, double eps) {
  require(eps >= 0.0, "eps_good_set requires eps >= 0");
  const double cut = inst.best_mean() - eps;
  std::vector<int> good;
  for (int i = 0; i < inst.K(); ++i) {
    if (inst.means[i] >= cut) good.push_back(i);
  }
  return good;
}

std::vector<int> eps_good_set_multiplicative(const BanditInstance& inst, double eps) {
  require(eps >= 0.0 && eps < 1.0, "multiplicative good set requires eps in [0,1)");
  for (double m : inst.means) {
    require(m > 0.0, "multiplicative good set requires strictly positive means");
  }
  const double star = inst.best_mean();
  const double cut = (1.0 - eps) * star;
  std::vector<int> good;
  for (int i = 0; i < inst.K(); ++i) {
    if (inst.means[i] >= cut) good.push_back(i);
  }
  return good;
}

GapStructure gap_structure(const std::vector<double>& means, double tol) {
  if (means.size() < 2) throw std::invalid_argument("gap_structure requires K >= 2");
  const double star = *std::max_element(means.begin(), means.end());
  const int K = static_cast<int>(means.size());

  std::vector<int> order(K);
  for (int i = 0; i < K; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    double ga = star - means[a], gb = star - means[b];
    return ga != gb ? ga < gb : a < b;
  });

  GapStructure gs;
  for (int idx : order) {
    const double gap = star - means[idx];
    if (gs.distinct_gaps.empty() || gap - gs.distinct_gaps.back() > tol) {
      gs.distinct_gaps.push_back(gap);
      gs.classes.emplace_back();
    }
    gs.classes.back().push_back(idx);
  }
  gs.c_mu = static_cast<int>(gs.distinct_gaps.size());
  return gs;
}

int gap_index(const GapStructure& gaps, double eps) {
  if (eps < 0.0) throw std::invalid_argument("gap_index requires eps >= 0");
  int level = 0;
  while (level + 1 < gaps.c_mu && eps >= gaps.distinct_gaps[level + 1]) ++level;
  return level;
}

}  // namespace purex
