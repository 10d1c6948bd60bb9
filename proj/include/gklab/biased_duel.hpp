#pragma once

#include <vector>

#include "gklab/signal_model.hpp"
#include "gklab/solo_game.hpp"

namespace gklab {

enum class Candidate { A, B };

// Tie handling when both applicants pass the gatekeeper. rho is the
// probability that A wins a tie. TypeConditional applies rho only to
// same-type ties; TypeInvariant hands A the position with probability rho
// whenever both pass, regardless of revealed types.
struct TiePolicy {
  enum class Kind { EqualSplit, TypeConditional, TypeInvariant };
  Kind kind = Kind::EqualSplit;
  double rho = 0.5;

  static TiePolicy equal_split() { return {Kind::EqualSplit, 0.5}; }
  static TiePolicy type_conditional(double rho);
  static TiePolicy type_invariant(double rho);

  // rho seen from a candidate's side (A gets rho, B gets 1-rho).
  double rho_for(Candidate c) const { return c == Candidate::A ? rho : 1.0 - rho; }
};

struct BiasedCandidate {
  double mu;     // prior Pr(H)
  double q;      // gatekeeper accuracy for this candidate, in [0.5,1)
  double gamma;  // application cost, in (0,1)
};

// Two-candidate market. The test is fully revealing (phi=0) and the hire
// utility is 1 for both types.
struct BiasedMarket {
  BiasedCandidate a, b;
  SignalModel model = SignalModel::polynomial_example();
  TiePolicy tie = TiePolicy::equal_split();

  void validate() const;
  const BiasedCandidate& of(Candidate c) const { return c == Candidate::A ? a : b; }
  const BiasedCandidate& rival_of(Candidate c) const { return c == Candidate::A ? b : a; }
};

struct WinProbs {
  double phi_h = 0.0;  // Pr(hired | own type H, passed the gatekeeper)
  double phi_l = 0.0;
};

struct BiasedEquilibrium {
  double x_a = 0.0, x_b = 0.0;
  WinProbs win_a, win_b;
  int iterations = 0;
  double residual = 0.0;          // max best-response defect at the fixed point
  bool converged = false;
  bool multiple_equilibria = false;  // corner restarts found a distinct fixed point
};

struct OutcomeDistribution {
  double pr_hire_a = 0.0;
  double pr_hire_b = 0.0;
  double pr_hire_a_and_h = 0.0;
  double pr_hire_h = 0.0;   // hired candidate is of type H
  double pr_best = 0.0;     // hired type equals the best realized type;
                            // no hire counts only when neither applied
  double pr_no_hire = 0.0;
};

struct OptOutReport {
  struct Side {
    double phi_h_at_zero = 0.0;  // win probabilities facing a rival who always applies
    double phi_l_at_zero = 0.0;
    bool always_apply = false;   // gamma below phi_l: applying is dominant
    bool opt_out_possible = false;  // gamma above phi_h: opting out can be an equilibrium
  };
  Side a, b;
  bool two_candidate_family = false;
};

// Grid probe of the claimed best-response / equilibrium monotonicities.
enum class BiasedParameter { MuRival, QRival, GammaRival, XRival };
enum class ProbeMode { BestResponse, Equilibrium };

struct MonotonicityReport {
  std::vector<double> thresholds;          // x_i along the grid
  std::vector<bool> side_condition_met;    // per grid point (QRival clause only)
  bool direction_holds = true;             // strict order in the claimed direction:
                                           // increasing in mu_j and q_j, decreasing
                                           // in x_j and gamma_j
  int violations = 0;
  bool asserted = false;                   // false when no adjacent pair qualified
};

namespace biased {

// Hire probabilities for one candidate conditional on passing the gatekeeper,
// as a function of the rival's threshold.
WinProbs win_probabilities(const BiasedMarket& m, Candidate c, double x_other);

ThresholdResult best_response(const BiasedMarket& m, Candidate c, double x_other);

// Damped simultaneous best-response iteration from the solo baselines,
// with corner restarts to detect multiplicity.
BiasedEquilibrium solve_equilibrium(const BiasedMarket& m);

OptOutReport opt_out_diagnosis(const BiasedMarket& m);

// Exact enumeration over types x application x gatekeeper outcomes.
OutcomeDistribution outcome_distribution(const BiasedMarket& m,
                                         const BiasedEquilibrium& eq);
OutcomeDistribution outcome_distribution_at(const BiasedMarket& m, double x_a,
                                            double x_b);

MonotonicityReport comparative_statics_probe(const BiasedMarket& m, Candidate i,
                                             BiasedParameter parameter,
                                             const std::vector<double>& grid,
                                             ProbeMode mode);

}  // namespace biased
}  // namespace gklab
