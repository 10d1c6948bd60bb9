#pragma once

#include "gklab/signal_model.hpp"

namespace gklab {

// How the gatekeeper treats its binary signal.
struct GatekeeperPolicy {
  enum class Kind { None, Mechanical, Mixed };
  Kind kind = Kind::Mechanical;
  double sigma = 0.0;  // probability of unconditional acceptance (Mixed only)

  static GatekeeperPolicy none() { return {Kind::None, 0.0}; }
  static GatekeeperPolicy mechanical() { return {Kind::Mechanical, 0.0}; }
  static GatekeeperPolicy mixed(double sigma);

  // Pr(gatekeeper passes the applicant | state), for signal quality q.
  double pass_prob(State state, double q) const;
};

// Parameter bundle for the one-candidate game.
struct SoloMarket {
  double mu;     // prior Pr(H), in (0,1)
  double q;      // gatekeeper signal quality, in (0.5,1)
  double gamma;  // candidate test cost
  double phi;    // low-type test pass probability, in (0,1)
  double alpha;  // low-type hire utility, > 0
  double d;      // gatekeeper disutility for passing a low type, > 0
  SignalModel model = SignalModel::polynomial_example();

  // Throws std::invalid_argument naming the violated constraint.
  void validate() const;
};

enum class Regime { Interior, AlwaysApply, NeverApply };

struct ThresholdResult {
  double x = 0.0;
  Regime regime = Regime::Interior;
};

struct CorrectnessReport {
  double theta = 0.0;           // theta(q), with the mechanical gatekeeper
  double theta_baseline = 0.0;  // theta-hat, no gatekeeper
  double improvement = 0.0;     // theta(q) - theta-hat
  double predictor_lhs = 0.0;
  bool predicted_improves = false;     // predictor_lhs <= q
};

enum class CorrectnessRegime { LowQualityHelps, LowQualityHurts };

struct RegimeResult {
  CorrectnessRegime regime;
  double ratio;       // mu(1-F_H(xhat)) / ((1-mu)(1-F_L(xhat)))
  bool boundary;      // ratio == phi, classified as LowQualityHurts
};

namespace solo {

// Candidate threshold without a gatekeeper (x-hat); always interior.
ThresholdResult baseline_threshold(const SoloMarket& m);

// Candidate threshold facing a mechanical gatekeeper of quality q.
ThresholdResult mechanical_threshold(const SoloMarket& m);

// Expected utility from applying at subjective quality p under the policy.
double candidate_apply_utility(const SoloMarket& m, const GatekeeperPolicy& policy,
                               double p);

// Process correctness without a gatekeeper (theta-hat).
double baseline_correctness(const SoloMarket& m);

// Correctness with the mechanical gatekeeper, plus the improvement test.
CorrectnessReport mechanical_correctness(const SoloMarket& m);

// Whether an almost-uninformative gatekeeper helps or hurts this market.
RegimeResult regime_classify(const SoloMarket& m);

// E[p | p >= threshold(policy)] under the unconditional quality mixture.
double mean_applicant_quality(const SoloMarket& m, const GatekeeperPolicy& policy);

// Threshold implied by an arbitrary policy (dispatch helper).
ThresholdResult policy_threshold(const SoloMarket& m, const GatekeeperPolicy& policy);

}  // namespace solo
}  // namespace gklab
