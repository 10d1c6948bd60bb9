#pragma once

#include "gklab/solo_game.hpp"

namespace gklab::strategic {

struct NontrivialityReport {
  double accept_margin = 0.0;  // positive when unconditional acceptance dominates reversed
  double reject_margin = 0.0;
  bool accept_dominates = false;  // first inequality reversed: always accept
  bool reject_dominates = false;  // second inequality reversed: always reject
  bool interior = false;          // both inequalities strict
};

struct SigmaOpt {
  double sigma_star = 0.0;
  double utility_star = 0.0;
};

struct MuBarResult {
  double value = 0.0;
  bool found = false;        // false: mechanical is always/never a local best response
  bool nonmonotone = false;  // marginal-at-zero crossed more than once over the scan
};

// Candidate threshold when the gatekeeper mixes: passes unconditionally with
// probability sigma, follows its signal otherwise. x(0)=x(q), x(1)=x-hat.
double mixed_threshold(const SoloMarket& m, double sigma);

// Closed-form d x(sigma) / d sigma; strictly positive for q > 0.5.
double threshold_sigma_derivative(const SoloMarket& m, double sigma);

// The interior condition on the gatekeeper's utility at the mechanical threshold.
NontrivialityReport nontriviality_check(const SoloMarket& m);

// Gatekeeper expected utility U_K(sigma), self-selection response included.
double keeper_utility(const SoloMarket& m, double sigma);

// Closed-form d U_K / d sigma at sigma = 0. Positive means the mechanical
// strategy is not a local best response.
double keeper_marginal_at_zero(const SoloMarket& m);

// Global maximizer of keeper_utility over [0,1]: coarse scan, then
// golden-section refinement of every local bracket.
SigmaOpt optimal_sigma(const SoloMarket& m);

// Smallest prior above which keeper_marginal_at_zero stays positive.
// mu is ignored in the template market.
MuBarResult mu_bar(const SoloMarket& market_template);

// Correctness of the mixed-policy process; theta(0)=theta(q), theta(1)=theta-hat.
double mixed_correctness(const SoloMarket& m, double sigma);

}  // namespace gklab::strategic
