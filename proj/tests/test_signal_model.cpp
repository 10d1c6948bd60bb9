#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "doctest.h"
#include "gklab/signal_model.hpp"

using namespace gklab;

namespace {

// independent quantile oracle: plain interval halving on the cdf
double quantile_oracle(const SignalModel& m, State s, double u) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 100; ++i) {
    double mid = 0.5 * (lo + hi);
    (m.cdf(s, mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("polynomial example closed forms") {
  auto m = SignalModel::polynomial_example();
  CHECK(m.cdf(State::H, 0.5) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(m.cdf(State::L, 0.5) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(m.cdf(State::H, 0.0) == 0.0);
  CHECK(m.cdf(State::L, 1.0) == 1.0);
  CHECK(m.pdf(State::H, 0.25) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m.pdf(State::L, 0.25) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(m.pdf(State::H, 0.5) / m.pdf(State::L, 0.5) == doctest::Approx(1.0));
}

TEST_CASE("domain errors outside [0,1]") {
  auto m = SignalModel::polynomial_example();
  CHECK_THROWS_AS(m.cdf(State::H, -0.1), std::domain_error);
  CHECK_THROWS_AS(m.cdf(State::L, 1.1), std::domain_error);
  CHECK_THROWS_AS(m.pdf(State::H, 2.0), std::domain_error);
  CHECK_THROWS_AS(m.quantile(State::H, 0.0), std::domain_error);
  CHECK_THROWS_AS(m.quantile(State::H, 1.0), std::domain_error);
}

TEST_CASE("consistency check") {
  auto m = SignalModel::polynomial_example();
  auto rep = m.consistency_check(1001);
  CHECK(rep.max_ratio_error <= 1e-12);
  CHECK(rep.fosd_violations == 0);
  CHECK(rep.positivity_violations == 0);
  CHECK(rep.ok());

  // degenerate two-point grid still passes for the closed forms
  CHECK(m.consistency_check(2).ok());
  CHECK_THROWS_AS(m.consistency_check(1), std::invalid_argument);

  // identical states violate the quality-space consistency everywhere but 0.5
  auto id = [](double x) { return x; };
  auto one = [](double) { return 1.0; };
  auto bad = SignalModel::custom(id, id, one, one);
  CHECK(bad.consistency_check(101).max_ratio_error > 0.1);
}

TEST_CASE("quantiles invert the cdf") {
  auto m = SignalModel::polynomial_example();
  CHECK(m.quantile(State::H, 0.25) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(m.quantile(State::L, 0.75) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(m.quantile(State::H, 1e-12) < 1e-5);

  for (State s : {State::H, State::L})
    for (int i = 1; i < 40; ++i) {
      double u = i / 40.0;
      double x = m.quantile(s, u);
      CHECK(x == doctest::Approx(quantile_oracle(m, s, u)).epsilon(1e-9));
      CHECK(m.cdf(s, x) == doctest::Approx(u).epsilon(1e-9));
    }
}

TEST_CASE("uniform mixture at mu = 0.5") {
  auto m = SignalModel::polynomial_example();
  for (int i = 0; i <= 100; ++i) {
    double x = i / 100.0;
    double mix = 0.5 * m.pdf(State::H, x) + 0.5 * m.pdf(State::L, x);
    CHECK(std::fabs(mix - 1.0) <= 1e-12);
  }
}

TEST_CASE("FOSD holds for consistent models") {
  auto m = SignalModel::polynomial_example();
  for (int i = 0; i <= 200; ++i) {
    double x = i / 200.0;
    CHECK(m.cdf(State::H, x) <= m.cdf(State::L, x) + 1e-15);
  }
}

TEST_CASE("piecewise-polynomial file loader") {
  const char* path = "signal_model_test.json";
  {
    std::ofstream out(path);
    out << R"({
      "cdf_H": {"breakpoints": [0.0, 1.0], "coefficients": [[0.0, 0.0, 1.0]]},
      "cdf_L": {"breakpoints": [0.0, 1.0], "coefficients": [[0.0, 2.0, -1.0]]}
    })";
  }
  auto m = SignalModel::from_file(path);
  auto ref = SignalModel::polynomial_example();
  for (int i = 0; i <= 50; ++i) {
    double x = i / 50.0;
    CHECK(m.cdf(State::H, x) == doctest::Approx(ref.cdf(State::H, x)).epsilon(1e-14));
    CHECK(m.cdf(State::L, x) == doctest::Approx(ref.cdf(State::L, x)).epsilon(1e-14));
    CHECK(m.pdf(State::L, x) == doctest::Approx(ref.pdf(State::L, x)).epsilon(1e-14));
  }
  CHECK(m.consistency_check(101).ok());
  // custom quantile goes through bisection
  CHECK(m.quantile(State::H, 0.25) == doctest::Approx(0.5).epsilon(1e-10));
  std::remove(path);

  CHECK_THROWS(SignalModel::from_file("no_such_file.json"));
}
