#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "gklab/solo_game.hpp"

using namespace gklab;

namespace {

SoloMarket example_market(double mu = 0.5, double q = 0.75) {
  return SoloMarket{mu, q, 0.4, 0.6, 0.5, 1.0};
}

// independent threshold oracle: zero crossing of the apply utility
double threshold_oracle(const SoloMarket& m, const GatekeeperPolicy& policy) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 100; ++i) {
    double mid = 0.5 * (lo + hi);
    (solo::candidate_apply_utility(m, policy, mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("market invariants") {
  CHECK_NOTHROW(example_market().validate());
  SoloMarket m = example_market();
  m.mu = 1.1;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  m = example_market();
  m.q = 0.5;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  m = example_market();
  m.gamma = 0.25;  // below alpha*phi
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
}

TEST_CASE("baseline threshold") {
  CHECK(solo::baseline_threshold(example_market()).x ==
        doctest::Approx(1.0 / 7.0).epsilon(1e-14));
  CHECK(solo::baseline_threshold(example_market(0.2)).x ==
        doctest::Approx(0.4).epsilon(1e-14));
  CHECK(solo::baseline_threshold(example_market(1.0 - 1e-9)).x < 1e-8);
  CHECK(solo::baseline_threshold(example_market()).regime == Regime::Interior);

  // threshold is the zero of the apply utility with no gatekeeper
  for (double mu : {0.2, 0.5, 0.8}) {
    SoloMarket m = example_market(mu);
    CHECK(solo::baseline_threshold(m).x ==
          doctest::Approx(threshold_oracle(m, GatekeeperPolicy::none())).epsilon(1e-9));
  }
}

TEST_CASE("mechanical threshold") {
  SoloMarket m = example_market();
  CHECK(solo::mechanical_threshold(m).x == doctest::Approx(1.0 / 19.0).epsilon(1e-14));
  CHECK(solo::mechanical_threshold(m).x ==
        doctest::Approx(threshold_oracle(m, GatekeeperPolicy::mechanical())).epsilon(1e-9));

  // x(q -> 0.5) recovers the no-gatekeeper threshold
  SoloMarket near_half = example_market(0.5, 0.5 + 1e-12);
  CHECK(solo::mechanical_threshold(near_half).x ==
        doctest::Approx(1.0 / 7.0).epsilon(1e-9));
  CHECK(solo::mechanical_threshold(example_market(0.5, 1.0 - 1e-9)).x < 1e-7);
}

TEST_CASE("candidate apply utility") {
  SoloMarket m = example_market();
  double xq = solo::mechanical_threshold(m).x;
  CHECK(std::fabs(solo::candidate_apply_utility(m, GatekeeperPolicy::mechanical(), xq)) <=
        1e-12);
  CHECK(solo::candidate_apply_utility(m, GatekeeperPolicy::none(), 1.0) ==
        doctest::Approx(0.6).epsilon(1e-14));
  CHECK(solo::candidate_apply_utility(m, GatekeeperPolicy::mechanical(), 0.0) ==
        doctest::Approx(-0.025).epsilon(1e-14));
  CHECK_THROWS_AS(solo::candidate_apply_utility(m, GatekeeperPolicy::none(), 1.5),
                  std::domain_error);

  // strictly increasing in p for every policy
  for (auto policy : {GatekeeperPolicy::none(), GatekeeperPolicy::mechanical(),
                      GatekeeperPolicy::mixed(0.3)}) {
    double prev = solo::candidate_apply_utility(m, policy, 0.0);
    for (int i = 1; i <= 50; ++i) {
      double u = solo::candidate_apply_utility(m, policy, i / 50.0);
      CHECK(u > prev);
      prev = u;
    }
  }
}

TEST_CASE("correctness values") {
  SoloMarket m = example_market();
  CHECK(solo::baseline_correctness(m) ==
        doctest::Approx(0.7693877551020408).epsilon(1e-12));
  CHECK(solo::baseline_correctness(example_market(0.2)) ==
        doctest::Approx(0.7952).epsilon(1e-12));

  CorrectnessReport cr = solo::mechanical_correctness(m);
  CHECK(cr.theta == doctest::Approx(0.8066481994459833).epsilon(1e-12));
  CHECK(cr.theta_baseline == doctest::Approx(0.7693877551020408).epsilon(1e-12));
  CHECK(cr.improvement == doctest::Approx(0.0372604443439425).epsilon(1e-10));
  CHECK(cr.predictor_lhs == doctest::Approx(0.7014753953529463).epsilon(1e-10));
  CHECK(cr.predicted_improves);

  // barely informative gatekeeper harms this market
  CHECK(solo::mechanical_correctness(example_market(0.5, 0.51)).improvement < 0.0);
}

TEST_CASE("phi -> 0 limit of the baseline") {
  SoloMarket m = example_market();
  m.phi = 1e-9;
  m.gamma = 0.4;  // alpha*phi ~ 0 < gamma holds
  double x = solo::baseline_threshold(m).x;
  double expected = m.mu * (1.0 - m.model.cdf(State::H, x)) + (1.0 - m.mu);
  CHECK(solo::baseline_correctness(m) == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("regime classifier") {
  auto r = solo::regime_classify(example_market(0.5));
  CHECK(r.regime == CorrectnessRegime::LowQualityHurts);
  CHECK(r.ratio == doctest::Approx(4.0 / 3.0).epsilon(1e-12));

  auto r2 = solo::regime_classify(example_market(0.2));
  CHECK(r2.regime == CorrectnessRegime::LowQualityHelps);
  CHECK(r2.ratio == doctest::Approx(0.168 / 0.288).epsilon(1e-12));

  CHECK(solo::regime_classify(example_market(1.0 - 1e-9)).regime ==
        CorrectnessRegime::LowQualityHurts);
}

TEST_CASE("sign of improvement agrees with the closed-form predictor") {
  for (int i = 1; i < 20; ++i)
    for (int j = 1; j < 20; ++j) {
      SoloMarket m = example_market(i / 20.0, 0.5 + j / 40.0 - 1e-9);
      CorrectnessReport cr = solo::mechanical_correctness(m);
      if (std::fabs(cr.improvement) <= 1e-14) continue;  // knife-edge cell
      CHECK((cr.improvement > 0.0) == (cr.predictor_lhs < m.q));
    }
}

TEST_CASE("mean applicant quality") {
  SoloMarket m = example_market();
  CHECK(solo::mean_applicant_quality(m, GatekeeperPolicy::none()) ==
        doctest::Approx(4.0 / 7.0).epsilon(1e-12));
  CHECK(solo::mean_applicant_quality(m, GatekeeperPolicy::mechanical()) ==
        doctest::Approx(10.0 / 19.0).epsilon(1e-12));

  // quadrature route (Custom clone) agrees with the closed form
  SoloMarket custom = m;
  custom.model = SignalModel::custom(
      [](double x) { return x * x; }, [](double x) { return 1.0 - (1.0 - x) * (1.0 - x); },
      [](double x) { return 2.0 * x; }, [](double x) { return 2.0 * (1.0 - x); });
  for (double mu : {0.3, 0.5, 0.7}) {
    SoloMarket a = m, b = custom;
    a.mu = b.mu = mu;
    CHECK(solo::mean_applicant_quality(a, GatekeeperPolicy::mechanical()) ==
          doctest::Approx(solo::mean_applicant_quality(b, GatekeeperPolicy::mechanical()))
              .epsilon(1e-8));
  }
}

TEST_CASE("self-selection worsens with signal quality") {
  // threshold and mean applicant quality both strictly decreasing in q
  const double bundles[][5] = {{0.5, 0.4, 0.6, 0.5, 1.0},
                               {0.3, 0.5, 0.4, 0.6, 1.0},
                               {0.7, 0.45, 0.5, 0.7, 2.0},
                               {0.2, 0.6, 0.3, 0.9, 0.5},
                               {0.9, 0.35, 0.55, 0.5, 1.5}};
  for (const auto& b : bundles) {
    double prev_x = 2.0, prev_mean = 2.0;
    for (int i = 51; i <= 99; ++i) {
      SoloMarket m{b[0], i / 100.0, b[1], b[2], b[3], b[4]};
      m.validate();
      double x = solo::mechanical_threshold(m).x;
      double mean = solo::mean_applicant_quality(m, GatekeeperPolicy::mechanical());
      CHECK(x < prev_x);
      CHECK(mean < prev_mean);
      prev_x = x;
      prev_mean = mean;
    }
  }
}
