#include "gklab/solo_game.hpp"

#include <cmath>
#include <stdexcept>

#include "gklab/numeric.hpp"
#include "gklab/strategic_keeper.hpp"

namespace gklab {

GatekeeperPolicy GatekeeperPolicy::mixed(double sigma) {
  if (!(sigma >= 0.0 && sigma <= 1.0))
    throw std::invalid_argument("sigma must lie in [0,1]");
  return {Kind::Mixed, sigma};
}

double GatekeeperPolicy::pass_prob(State state, double q) const {
  switch (kind) {
    case Kind::None:
      return 1.0;
    case Kind::Mechanical:
      return state == State::H ? q : 1.0 - q;
    case Kind::Mixed:
      return state == State::H ? q + sigma * (1.0 - q) : (1.0 - q) + sigma * q;
  }
  return 0.0;
}

void SoloMarket::validate() const {
  if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("mu must lie in (0,1)");
  if (!(q > 0.5 && q < 1.0)) throw std::invalid_argument("q must lie in (0.5,1)");
  if (!(phi > 0.0 && phi < 1.0)) throw std::invalid_argument("phi must lie in (0,1)");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(d > 0.0)) throw std::invalid_argument("d must be positive");
  if (!(alpha * phi < gamma && gamma < 1.0))
    throw std::invalid_argument("gamma must satisfy alpha*phi < gamma < 1");
}

namespace solo {

ThresholdResult baseline_threshold(const SoloMarket& m) {
  double c = (m.gamma - m.alpha * m.phi) * (1.0 - m.mu);
  double x = c / (c + (1.0 - m.gamma) * m.mu);
  return {x, Regime::Interior};
}

ThresholdResult mechanical_threshold(const SoloMarket& m) {
  double c = (m.gamma - m.alpha * m.phi) * (1.0 - m.mu) * (1.0 - m.q);
  double x = c / (c + (1.0 - m.gamma) * m.mu * m.q);
  return {x, Regime::Interior};
}

ThresholdResult policy_threshold(const SoloMarket& m, const GatekeeperPolicy& policy) {
  switch (policy.kind) {
    case GatekeeperPolicy::Kind::None:
      return baseline_threshold(m);
    case GatekeeperPolicy::Kind::Mechanical:
      return mechanical_threshold(m);
    case GatekeeperPolicy::Kind::Mixed:
      return {strategic::mixed_threshold(m, policy.sigma), Regime::Interior};
  }
  return {};
}

double candidate_apply_utility(const SoloMarket& m, const GatekeeperPolicy& policy,
                               double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("p must lie in [0,1]");
  double wh = m.mu * p;
  double wl = (1.0 - m.mu) * (1.0 - p);
  double ah = policy.pass_prob(State::H, m.q);
  double al = policy.pass_prob(State::L, m.q);
  return (wh * ah * (1.0 - m.gamma) + wl * al * (m.alpha * m.phi - m.gamma)) / (wh + wl);
}

double baseline_correctness(const SoloMarket& m) {
  double x = baseline_threshold(m).x;
  double fh = m.model.cdf(State::H, x), fl = m.model.cdf(State::L, x);
  return m.mu * (1.0 - fh) + (1.0 - m.mu) * (1.0 - (1.0 - fl) * m.phi);
}

CorrectnessReport mechanical_correctness(const SoloMarket& m) {
  double xh = baseline_threshold(m).x;
  double xq = mechanical_threshold(m).x;
  double fh_hat = m.model.cdf(State::H, xh), fl_hat = m.model.cdf(State::L, xh);
  double fh_q = m.model.cdf(State::H, xq), fl_q = m.model.cdf(State::L, xq);

  CorrectnessReport rep;
  rep.theta_baseline = m.mu * (1.0 - fh_hat) + (1.0 - m.mu) * (1.0 - (1.0 - fl_hat) * m.phi);
  rep.theta = m.mu * m.q * (1.0 - fh_q) +
              (1.0 - m.mu) * (1.0 - (1.0 - fl_q) * (1.0 - m.q) * m.phi);
  rep.improvement = rep.theta - rep.theta_baseline;
  rep.predictor_lhs =
      (m.mu * (1.0 - fh_hat) + (1.0 - m.mu) * m.phi * (fl_hat - fl_q)) /
      (m.mu * (1.0 - fh_q) + (1.0 - m.mu) * m.phi * (1.0 - fl_q));
  rep.predicted_improves = rep.predictor_lhs <= m.q;
  return rep;
}

RegimeResult regime_classify(const SoloMarket& m) {
  double x = baseline_threshold(m).x;
  double ratio = m.mu * (1.0 - m.model.cdf(State::H, x)) /
                 ((1.0 - m.mu) * (1.0 - m.model.cdf(State::L, x)));
  RegimeResult r;
  r.ratio = ratio;
  r.boundary = ratio == m.phi;
  r.regime = ratio >= m.phi ? CorrectnessRegime::LowQualityHurts
                            : CorrectnessRegime::LowQualityHelps;
  return r;
}

double mean_applicant_quality(const SoloMarket& m, const GatekeeperPolicy& policy) {
  double t = policy_threshold(m, policy).x;
  if (t >= 1.0) return 1.0;
  if (m.model.family() == SignalModel::Family::PolynomialExample) {
    // mixture density 2(1-mu) + 2(2mu-1)x integrates in closed form
    double a = 1.0 - m.mu, b = 2.0 * m.mu - 1.0;
    double m1 = a * (1.0 - t * t) + (2.0 / 3.0) * b * (1.0 - t * t * t);
    double m0 = 2.0 * a * (1.0 - t) + b * (1.0 - t * t);
    return m1 / m0;
  }
  auto density = [&](double x) {
    return m.mu * m.model.pdf(State::H, x) + (1.0 - m.mu) * m.model.pdf(State::L, x);
  };
  double m1 = numeric::adaptive_simpson([&](double x) { return x * density(x); }, t, 1.0);
  double m0 = numeric::adaptive_simpson(density, t, 1.0);
  return m1 / m0;
}

}  // namespace solo
}  // namespace gklab
