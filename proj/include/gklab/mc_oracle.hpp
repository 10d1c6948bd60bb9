#pragma once

#include <cstdint>
#include <optional>

#include "gklab/biased_duel.hpp"
#include "gklab/solo_game.hpp"

namespace gklab::mc {

struct SimConfig {
  std::uint64_t seed = 0;
  std::int64_t replications = 0;
  // 0: use GKLAB_THREADS or hardware concurrency. Results are identical at
  // any thread count.
  int threads = 0;
};

struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;  // binomial for probabilities
};

struct SoloSimReport {
  std::int64_t n = 0;
  std::int64_t applied = 0;
  std::int64_t gate_passed = 0;
  std::int64_t hired = 0;
  std::int64_t correct = 0;
  double applicant_quality_sum = 0.0;
  double utility_sum = 0.0;

  Estimate correctness() const;
  Estimate application_rate() const;
  Estimate hire_rate() const;
  double mean_applicant_quality() const;
  double mean_candidate_utility() const;
};

struct BiasedSimReport {
  std::int64_t n = 0;
  std::int64_t hire_a = 0;
  std::int64_t hire_b = 0;
  std::int64_t hire_a_and_h = 0;
  std::int64_t hire_h = 0;
  std::int64_t best = 0;
  std::int64_t no_hire = 0;

  Estimate pr_hire_a() const;
  Estimate pr_hire_b() const;
  Estimate pr_hire_a_and_h() const;
  Estimate pr_hire_h() const;
  Estimate pr_best() const;
  Estimate pr_no_hire() const;
};

// Seeded simulation of the one-candidate game. The candidate applies iff her
// sampled quality reaches the analytic threshold for the policy, unless an
// override threshold is supplied.
SoloSimReport simulate_solo(const SoloMarket& market, const GatekeeperPolicy& policy,
                            std::optional<double> threshold_override,
                            const SimConfig& config);

// Seeded simulation of the two-candidate game at given thresholds.
BiasedSimReport simulate_biased(const BiasedMarket& market, double x_a, double x_b,
                                const SimConfig& config);

}  // namespace gklab::mc
