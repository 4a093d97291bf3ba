#include "purex/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "purex/instances.hpp"

namespace purex {

namespace {

constexpr double kRootTol = 1e-12;

int unique_best_arm(const std::vector<double>& means) {
  if (means.size() < 2) throw std::invalid_argument("oracle requires K >= 2");
  int best = 0;
  for (int i = 1; i < static_cast<int>(means.size()); ++i) {
    if (means[i] > means[best]) best = i;
  }
  for (int i = 0; i < static_cast<int>(means.size()); ++i) {
    if (i != best && means[i] == means[best]) {
      throw std::invalid_argument("oracle requires a unique best arm");
    }
  }
  return best;
}

std::vector<double> gaps_excluding_best(const std::vector<double>& means, int best) {
  std::vector<double> gaps;
  gaps.reserve(means.size() - 1);
  for (int i = 0; i < static_cast<int>(means.size()); ++i) {
    if (i != best) gaps.push_back(means[best] - means[i]);
  }
  return gaps;
}

double pole_of(const std::vector<double>& gaps) {
  double gmin = *std::min_element(gaps.begin(), gaps.end());
  return 1.0 / (gmin * gmin);
}

// Root of a convex decreasing f past its pole: bisection on a bracket grown
// from the pole, then a few Newton steps to push |f| below kRootTol.
double find_root(const std::function<double(double)>& f,
                 const std::function<double(double)>& df, double pole) {
  double lo = pole * (1.0 + 1e-9);
  double hi = pole + 1.0;
  int guard = 0;
  while (f(hi) > 0.0) {
    hi = 2.0 * hi;
    if (++guard > 200) throw std::runtime_error("root bracket did not close");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double r = 0.5 * (lo + hi);
  for (int it = 0; it < 8 && std::fabs(f(r)) > kRootTol; ++it) {
    const double step = f(r) / df(r);
    const double next = r - step;
    r = (next > pole) ? next : 0.5 * (r + pole);  // stay in the domain
  }
  if (std::fabs(f(r)) > kRootTol) throw std::runtime_error("root refinement did not converge");
  return r;
}

}  // namespace

double psi_value(const std::vector<double>& means, double r) {
  const int best = unique_best_arm(means);
  const auto gaps = gaps_excluding_best(means, best);
  if (r <= pole_of(gaps)) throw std::invalid_argument("psi_value: r at or below the pole");
  double s = 0.0;
  for (double g : gaps) {
    const double d = r * g * g - 1.0;
    s += 1.0 / (d * d);
  }
  return s - 1.0;
}

double phi_value(const std::vector<double>& means, double beta, double r) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("phi_value: beta must lie in (0,1)");
  const int best = unique_best_arm(means);
  const auto gaps = gaps_excluding_best(means, best);
  if (r <= pole_of(gaps)) throw std::invalid_argument("phi_value: r at or below the pole");
  double s = 0.0;
  for (double g : gaps) s += 1.0 / (r * g * g - 1.0);
  return s - (1.0 - beta) / beta;
}

Allocation solve_bai_beta(const std::vector<double>& means, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::invalid_argument("solve_bai_beta: beta must lie in (0,1)");
  }
  const int best = unique_best_arm(means);
  const auto gaps = gaps_excluding_best(means, best);
  const double pole = pole_of(gaps);
  auto f = [&](double r) {
    double s = 0.0;
    for (double g : gaps) s += 1.0 / (r * g * g - 1.0);
    return s - (1.0 - beta) / beta;
  };
  auto df = [&](double r) {
    double s = 0.0;
    for (double g : gaps) {
      const double d = r * g * g - 1.0;
      s -= g * g / (d * d);
    }
    return s;
  };
  const double r = find_root(f, df, pole);

  Allocation a;
  a.time = 2.0 * r / beta;
  a.beta = beta;
  a.weights.assign(means.size(), 0.0);
  a.weights[best] = beta;
  for (int i = 0; i < static_cast<int>(means.size()); ++i) {
    if (i == best) continue;
    const double g = means[best] - means[i];
    a.weights[i] = beta / (r * g * g - 1.0);
  }
  return a;
}

Allocation solve_bai(const std::vector<double>& means) {
  const int best = unique_best_arm(means);
  const auto gaps = gaps_excluding_best(means, best);
  const double pole = pole_of(gaps);
  auto f = [&](double r) {
    double s = 0.0;
    for (double g : gaps) {
      const double d = r * g * g - 1.0;
      s += 1.0 / (d * d);
    }
    return s - 1.0;
  };
  auto df = [&](double r) {
    double s = 0.0;
    for (double g : gaps) {
      const double d = r * g * g - 1.0;
      s -= 2.0 * g * g / (d * d * d);
    }
    return s;
  };
  const double r = find_root(f, df, pole);

  Allocation a;
  a.weights.assign(means.size(), 0.0);
  double ratio_sum = 0.0;
  for (int i = 0; i < static_cast<int>(means.size()); ++i) {
    if (i == best) continue;
    const double g = means[best] - means[i];
    a.weights[i] = 1.0 / (r * g * g - 1.0);  // ratio to the best-arm weight
    ratio_sum += a.weights[i];
  }
  const double w_best = 1.0 / (1.0 + ratio_sum);
  a.weights[best] = w_best;
  double worst_cost = std::numeric_limits<double>::infinity();
  for (int i = 0; i < static_cast<int>(means.size()); ++i) {
    if (i == best) continue;
    a.weights[i] *= w_best;
    const double g = means[best] - means[i];
    worst_cost = std::min(worst_cost, g * g / (1.0 / w_best + 1.0 / a.weights[i]));
  }
  a.time = 2.0 / worst_cost;
  return a;
}

std::vector<double> modified_instance(const std::vector<double>& means, double eps, int i) {
  if (!(eps > 0.0)) throw std::invalid_argument("modified_instance requires eps > 0");
  if (i < 0 || i >= static_cast<int>(means.size())) {
    throw std::invalid_argument("modified_instance: arm out of range");
  }
  std::vector<double> out = means;
  for (int j = 0; j < static_cast<int>(out.size()); ++j) {
    if (j != i) out[j] -= eps;
  }
  return out;
}

Allocation solve_eps(const std::vector<double>& means, double eps,
                     std::optional<double> beta, std::optional<int> i) {
  if (eps < 0.0) throw std::invalid_argument("solve_eps requires eps >= 0");
  if (eps == 0.0) {
    const int best = unique_best_arm(means);
    if (i && *i != best) throw std::invalid_argument("solve_eps: arm is not 0-good");
    return beta ? solve_bai_beta(means, *beta) : solve_bai(means);
  }
  const double star = *std::max_element(means.begin(), means.end());
  int target;
  if (i) {
    target = *i;
    if (target < 0 || target >= static_cast<int>(means.size()) ||
        means[target] < star - eps) {
      throw std::invalid_argument("solve_eps: arm is not eps-good");
    }
  } else {
    target = static_cast<int>(std::max_element(means.begin(), means.end()) - means.begin());
  }
  const auto reduced = modified_instance(means, eps, target);
  return beta ? solve_bai_beta(reduced, *beta) : solve_bai(reduced);
}

namespace {

// β-constrained multiplicative solve: the common cost level c solves
//   Σ_{j≠b} (1−ε)² / (d_j²/c − 1/β) = 1 − β,  d_j = μ_b − (1−ε)μ_j,
// which is increasing in c on (0, β·min d²). T = 2/c.
Allocation solve_mult_at_beta(const std::vector<double>& means, double eps, double beta,
                              int best) {
  const double one_eps = 1.0 - eps;
  std::vector<double> d2;
  d2.reserve(means.size() - 1);
  double d2min = std::numeric_limits<double>::infinity();
  for (int j = 0; j < static_cast<int>(means.size()); ++j) {
    if (j == best) continue;
    const double d = means[best] - one_eps * means[j];
    d2.push_back(d * d);
    d2min = std::min(d2min, d * d);
  }
  auto wsum = [&](double c) {
    double s = 0.0;
    for (double dd : d2) s += one_eps * one_eps / (dd / c - 1.0 / beta);
    return s - (1.0 - beta);
  };
  double lo = beta * d2min * 1e-18;
  double hi = beta * d2min * (1.0 - 1e-15);
  if (wsum(hi) < 0.0) throw std::runtime_error("multiplicative bracket did not close");
  for (int it = 0; it < 200 && (hi - lo) > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (wsum(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double c = 0.5 * (lo + hi);

  Allocation a;
  a.time = 2.0 / c;
  a.beta = beta;
  a.weights.assign(means.size(), 0.0);
  a.weights[best] = beta;
  int k = 0;
  for (int j = 0; j < static_cast<int>(means.size()); ++j) {
    if (j == best) continue;
    a.weights[j] = one_eps * one_eps / (d2[k] / c - 1.0 / beta);
    ++k;
  }
  return a;
}

}  // namespace

Allocation solve_eps_multiplicative(const std::vector<double>& means, double eps,
                                    std::optional<double> beta) {
  if (!(eps >= 0.0 && eps < 1.0)) {
    throw std::invalid_argument("solve_eps_multiplicative requires eps in [0,1)");
  }
  for (double m : means) {
    if (!(m > 0.0)) throw std::invalid_argument("solve_eps_multiplicative requires positive means");
  }
  const int best = unique_best_arm(means);
  if (beta) {
    if (!(*beta > 0.0 && *beta < 1.0)) {
      throw std::invalid_argument("solve_eps_multiplicative: beta must lie in (0,1)");
    }
    return solve_mult_at_beta(means, eps, *beta, best);
  }
  // Golden-section over β; T(β) is unimodal (checked against a grid in tests).
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 1e-9, b = 1.0 - 1e-9;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = solve_mult_at_beta(means, eps, c, best).time;
  double fd = solve_mult_at_beta(means, eps, d, best).time;
  while (b - a > 1e-8) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = solve_mult_at_beta(means, eps, c, best).time;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = solve_mult_at_beta(means, eps, d, best).time;
    }
  }
  Allocation out = solve_mult_at_beta(means, eps, 0.5 * (a + b), best);
  out.beta = std::nullopt;  // β was optimized away, not a caller constraint
  return out;
}

HardnessConstants hardness_constants(const std::vector<double>& means, double eps0,
                                     double eps_tilde) {
  if (!(eps0 > 0.0)) throw std::invalid_argument("hardness_constants requires eps0 > 0");
  if (eps_tilde < 0.0) throw std::invalid_argument("hardness_constants requires eps_tilde >= 0");
  const GapStructure gs = gap_structure(means);
  const int cmu = gs.c_mu;
  const auto& g = gs.distinct_gaps;  // g[l-1] = Δ_l in 1-based level notation
  std::vector<double> sz(cmu);
  for (int l = 0; l < cmu; ++l) sz[l] = static_cast<double>(gs.classes[l].size());
  const double n_best = sz[0];
  const double star = *std::max_element(means.begin(), means.end());
  const double inv_e0 = 1.0 / eps0;
  const double sqrt2 = std::sqrt(2.0);

  HardnessConstants out;

  // Error-rate constant at slack ε̃: split arms into best / other ε̃-good / rest.
  {
    double n_good = 0.0;
    double dmu = std::numeric_limits<double>::infinity();
    for (double m : means) {
      if (m >= star - eps_tilde) {
        n_good += 1.0;
      } else {
        dmu = std::min(dmu, star - m);
      }
    }
    const double cval = std::max(2.0 / dmu - inv_e0, inv_e0);
    double h = (n_good - n_best) * cval * cval;
    if (std::isfinite(dmu)) {
      h += 2.0 * n_best / (dmu * dmu);
      for (double m : means) {
        if (m < star - eps_tilde) {
          const double t = std::max(cval, sqrt2 / (star - m));
          h += t * t;
        }
      }
    }
    out.h_eps = h;
  }

  // Per-level constants H_l = min_{j<=l} max(H̄_{l,j}, H̃_{l,j}), 1-based l,j.
  auto C_at = [&](int l) { return 2.0 / g[l - 1] - inv_e0; };  // needs l >= 2
  auto C_pair = [&](int i, int j) {
    return 2.0 * (g[j - 1] * inv_e0 + 1.0) / (g[i - 1] - g[j - 1]) + 3.0 * inv_e0;
  };
  auto sq = [](double v) { return v * v; };
  for (int i = 1; i < cmu; ++i) {
    double best_ij = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= i; ++j) {
      const double cpair = C_pair(i + 1, j);
      const double cj1 = C_at(j + 1);
      double mid_sz = 0.0;
      for (int k = 2; k <= j; ++k) mid_sz += sz[k - 1];
      double tail_sz = 0.0;
      for (int k = i + 1; k <= cmu; ++k) tail_sz += sz[k - 1];
      double hbar = n_best * sq(std::max(sqrt2 / g[j], cpair)) +
                    sq(std::max(cj1, cpair)) * (mid_sz + tail_sz);
      for (int k = j + 1; k <= i; ++k) {
        hbar += sz[k - 1] * sq(std::max({cj1, cpair, sqrt2 / g[k - 1]}));
      }

      double head_sz = 0.0;
      for (int k = 1; k <= j; ++k) head_sz += sz[k - 1];
      double htil = 2.0 * n_best / sq(g[j]) + sq(std::max(cj1, inv_e0)) * mid_sz +
                    2.0 * head_sz / sq(g[i] - g[j - 1]);
      for (int k = j + 1; k <= cmu; ++k) {
        htil += sz[k - 1] * sq(std::max({cj1, inv_e0, sqrt2 / g[k - 1]}));
      }
      best_ij = std::min(best_ij, std::max(hbar, htil));
    }
    out.h_levels.push_back(best_ij);
  }
  return out;
}

}  // namespace purex
