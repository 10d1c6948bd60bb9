#include "gklab/strategic_keeper.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gklab/numeric.hpp"

namespace gklab::strategic {

namespace {

// Shared pieces of the indifference condition.
struct Pieces {
  double cost;   // (gamma - phi*alpha)(1-mu)
  double gain;   // (1-gamma)*mu
};

Pieces pieces(const SoloMarket& m) {
  return {(m.gamma - m.phi * m.alpha) * (1.0 - m.mu), (1.0 - m.gamma) * m.mu};
}

}  // namespace

double mixed_threshold(const SoloMarket& m, double sigma) {
  if (!(sigma >= 0.0 && sigma <= 1.0))
    throw std::domain_error("sigma must lie in [0,1]");
  auto [cost, gain] = pieces(m);
  double num = cost * ((1.0 - m.q) + sigma * m.q);
  return num / (num + gain * (m.q + sigma * (1.0 - m.q)));
}

double threshold_sigma_derivative(const SoloMarket& m, double sigma) {
  if (!(sigma >= 0.0 && sigma <= 1.0))
    throw std::domain_error("sigma must lie in [0,1]");
  auto [cost, gain] = pieces(m);
  double den = cost * ((1.0 - m.q) + sigma * m.q) + gain * (m.q + sigma * (1.0 - m.q));
  return cost * gain * (2.0 * m.q - 1.0) / (den * den);
}

NontrivialityReport nontriviality_check(const SoloMarket& m) {
  double x = solo::mechanical_threshold(m).x;
  double sh = m.mu * (1.0 - m.model.cdf(State::H, x));
  double sl = m.d * m.phi * (1.0 - m.mu) * (1.0 - m.model.cdf(State::L, x));
  NontrivialityReport rep;
  rep.accept_margin = m.q * sh - (1.0 - m.q) * sl;
  rep.reject_margin = (1.0 - m.q) * sh - m.q * sl;
  rep.accept_dominates = rep.reject_margin >= 0.0;  // even a low signal is worth passing
  rep.reject_dominates = rep.accept_margin <= 0.0;
  rep.interior = rep.accept_margin > 0.0 && rep.reject_margin < 0.0;
  return rep;
}

double keeper_utility(const SoloMarket& m, double sigma) {
  double x = mixed_threshold(m, sigma);
  return m.mu * (1.0 - m.model.cdf(State::H, x)) * (m.q + sigma * (1.0 - m.q)) -
         m.d * m.phi * (1.0 - m.mu) * (1.0 - m.model.cdf(State::L, x)) *
             ((1.0 - m.q) + m.q * sigma);
}

double keeper_marginal_at_zero(const SoloMarket& m) {
  double x = solo::mechanical_threshold(m).x;
  double xp = threshold_sigma_derivative(m, 0.0);
  double direct = m.mu * (1.0 - m.q) * (1.0 - m.model.cdf(State::H, x)) -
                  m.d * m.phi * (1.0 - m.mu) * m.q * (1.0 - m.model.cdf(State::L, x));
  double threshold_term = m.mu * m.q * m.model.pdf(State::H, x) -
                          m.d * m.phi * (1.0 - m.mu) * (1.0 - m.q) * m.model.pdf(State::L, x);
  return direct - threshold_term * xp;
}

SigmaOpt optimal_sigma(const SoloMarket& m) {
  constexpr int kScanSteps = 1000;
  std::vector<double> u(kScanSteps + 1);
  for (int i = 0; i <= kScanSteps; ++i)
    u[i] = keeper_utility(m, static_cast<double>(i) / kScanSteps);

  auto f = [&](double s) { return keeper_utility(m, s); };
  SigmaOpt best{0.0, u[0]};
  auto consider = [&](double s, double v) {
    if (v > best.utility_star) best = {s, v};
  };
  consider(1.0, u[kScanSteps]);
  // refine every local bracket, not just the global scan winner
  for (int i = 1; i < kScanSteps; ++i) {
    if (u[i] >= u[i - 1] && u[i] >= u[i + 1]) {
      auto [s, v] = numeric::golden_section_max(
          f, static_cast<double>(i - 1) / kScanSteps,
          static_cast<double>(i + 1) / kScanSteps, 1e-8);
      consider(s, v);
    }
  }
  return best;
}

MuBarResult mu_bar(const SoloMarket& market_template) {
  constexpr int kScanSteps = 1000;
  auto marginal = [&](double mu) {
    SoloMarket m = market_template;
    m.mu = mu;
    return keeper_marginal_at_zero(m);
  };

  MuBarResult res;
  int last_nonpositive = -1;
  int crossings = 0;
  bool prev_positive = marginal(1.0 / kScanSteps) > 0.0;
  for (int i = 1; i < kScanSteps; ++i) {
    bool pos = marginal(static_cast<double>(i) / kScanSteps) > 0.0;
    if (!pos) last_nonpositive = i;
    if (pos != prev_positive) {
      ++crossings;
      prev_positive = pos;
    }
  }
  if (!prev_positive) return res;  // never positive at the top of the grid
  res.found = true;
  res.nonmonotone = crossings > 1;
  if (last_nonpositive < 0) {
    res.value = 1.0 / kScanSteps;  // positive on the whole scan grid
    return res;
  }
  double lo = static_cast<double>(last_nonpositive) / kScanSteps;
  double hi = lo + 1.0 / kScanSteps;
  while (hi - lo > 1e-6) {
    double mid = 0.5 * (lo + hi);
    (marginal(mid) > 0.0 ? hi : lo) = mid;
  }
  res.value = hi;
  return res;
}

double mixed_correctness(const SoloMarket& m, double sigma) {
  double x = mixed_threshold(m, sigma);
  double ah = m.q + sigma * (1.0 - m.q);
  double al = (1.0 - m.q) + sigma * m.q;
  return m.mu * ah * (1.0 - m.model.cdf(State::H, x)) +
         (1.0 - m.mu) * (1.0 - (1.0 - m.model.cdf(State::L, x)) * al * m.phi);
}

}  // namespace gklab::strategic
