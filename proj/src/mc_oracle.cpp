#include "gklab/mc_oracle.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <vector>

namespace gklab::mc {

namespace {

// Counter-based stream: each replication derives its generator state from
// (seed, index), so chunked parallel execution cannot reorder draws.
struct ReplicationRng {
  std::uint64_t state;

  ReplicationRng(std::uint64_t seed, std::uint64_t index)
      : state(mix(seed ^ mix(index + 0x9e3779b97f4a7c15ull))) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // strictly inside (0,1)
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }
};

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("GKLAB_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

constexpr std::int64_t kChunk = 1 << 16;

// Runs fn(chunk_index, first, count) over fixed-size chunks on a small pool.
// Chunk boundaries do not depend on the thread count.
template <typename Fn>
void parallel_chunks(std::int64_t n, int threads, Fn&& fn) {
  std::int64_t num_chunks = (n + kChunk - 1) / kChunk;
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::int64_t c = next.fetch_add(1);
      if (c >= num_chunks) break;
      std::int64_t first = c * kChunk;
      fn(c, first, std::min(kChunk, n - first));
    }
  };
  int t = std::min<std::int64_t>(resolve_threads(threads), num_chunks);
  if (t <= 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (int i = 0; i < t; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

Estimate binom(std::int64_t k, std::int64_t n) {
  double p = static_cast<double>(k) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

void check_config(const SimConfig& c) {
  if (c.replications < 1) throw std::invalid_argument("replications must be >= 1");
}

}  // namespace

Estimate SoloSimReport::correctness() const { return binom(correct, n); }
Estimate SoloSimReport::application_rate() const { return binom(applied, n); }
Estimate SoloSimReport::hire_rate() const { return binom(hired, n); }
double SoloSimReport::mean_applicant_quality() const {
  return applied == 0 ? 0.0 : applicant_quality_sum / static_cast<double>(applied);
}
double SoloSimReport::mean_candidate_utility() const {
  return utility_sum / static_cast<double>(n);
}

Estimate BiasedSimReport::pr_hire_a() const { return binom(hire_a, n); }
Estimate BiasedSimReport::pr_hire_b() const { return binom(hire_b, n); }
Estimate BiasedSimReport::pr_hire_a_and_h() const { return binom(hire_a_and_h, n); }
Estimate BiasedSimReport::pr_hire_h() const { return binom(hire_h, n); }
Estimate BiasedSimReport::pr_best() const { return binom(best, n); }
Estimate BiasedSimReport::pr_no_hire() const { return binom(no_hire, n); }

SoloSimReport simulate_solo(const SoloMarket& market, const GatekeeperPolicy& policy,
                            std::optional<double> threshold_override,
                            const SimConfig& config) {
  market.validate();
  check_config(config);
  double threshold =
      threshold_override ? *threshold_override : solo::policy_threshold(market, policy).x;

  struct Partial {
    std::int64_t applied = 0, gate_passed = 0, hired = 0, correct = 0;
    double quality_sum = 0.0, utility_sum = 0.0;
  };
  std::int64_t n = config.replications;
  std::vector<Partial> parts((n + kChunk - 1) / kChunk);

  parallel_chunks(n, config.threads, [&](std::int64_t c, std::int64_t first,
                                         std::int64_t count) {
    Partial p;
    for (std::int64_t k = 0; k < count; ++k) {
      ReplicationRng rng(config.seed, static_cast<std::uint64_t>(first + k));
      double u_state = rng.next_unit();
      double u_quality = rng.next_unit();
      double u_gate = rng.next_unit();
      double u_test = rng.next_unit();

      State state = u_state < market.mu ? State::H : State::L;
      double quality = market.model.quantile(state, u_quality);
      bool applies = quality >= threshold;
      bool gate_ok = applies && u_gate < policy.pass_prob(state, market.q);
      bool test_ok = gate_ok && (state == State::H || u_test < market.phi);

      if (applies) {
        ++p.applied;
        p.quality_sum += quality;
      }
      if (gate_ok) {
        ++p.gate_passed;
        p.utility_sum -= market.gamma;
        if (test_ok) p.utility_sum += state == State::H ? 1.0 : market.alpha;
      }
      bool hired = test_ok;
      if (hired) ++p.hired;
      if (hired == (state == State::H)) ++p.correct;
    }
    parts[c] = p;
  });

  SoloSimReport rep;
  rep.n = n;
  for (const Partial& p : parts) {  // fixed order keeps float sums reproducible
    rep.applied += p.applied;
    rep.gate_passed += p.gate_passed;
    rep.hired += p.hired;
    rep.correct += p.correct;
    rep.applicant_quality_sum += p.quality_sum;
    rep.utility_sum += p.utility_sum;
  }
  return rep;
}

BiasedSimReport simulate_biased(const BiasedMarket& market, double x_a, double x_b,
                                const SimConfig& config) {
  market.validate();
  check_config(config);
  if (!(x_a >= 0.0 && x_a <= 1.0 && x_b >= 0.0 && x_b <= 1.0))
    throw std::domain_error("thresholds must lie in [0,1]");

  struct Partial {
    std::int64_t hire_a = 0, hire_b = 0, hire_a_and_h = 0, hire_h = 0, best = 0,
                 no_hire = 0;
  };
  std::int64_t n = config.replications;
  std::vector<Partial> parts((n + kChunk - 1) / kChunk);

  parallel_chunks(n, config.threads, [&](std::int64_t c, std::int64_t first,
                                         std::int64_t count) {
    Partial p;
    for (std::int64_t k = 0; k < count; ++k) {
      ReplicationRng rng(config.seed, static_cast<std::uint64_t>(first + k));
      double u_sa = rng.next_unit(), u_sb = rng.next_unit();
      double u_qa = rng.next_unit(), u_qb = rng.next_unit();
      double u_ga = rng.next_unit(), u_gb = rng.next_unit();
      double u_tie = rng.next_unit();

      State wa = u_sa < market.a.mu ? State::H : State::L;
      State wb = u_sb < market.b.mu ? State::H : State::L;
      bool apply_a = market.model.quantile(wa, u_qa) >= x_a;
      bool apply_b = market.model.quantile(wb, u_qb) >= x_b;
      bool pass_a = apply_a && u_ga < (wa == State::H ? market.a.q : 1.0 - market.a.q);
      bool pass_b = apply_b && u_gb < (wb == State::H ? market.b.q : 1.0 - market.b.q);

      int hired = -1;  // 0: A, 1: B
      if (pass_a && pass_b) {
        double pr_a;
        if (market.tie.kind == TiePolicy::Kind::TypeInvariant)
          pr_a = market.tie.rho;
        else if (wa == wb)
          pr_a = market.tie.rho;
        else
          pr_a = wa == State::H ? 1.0 : 0.0;
        hired = u_tie < pr_a ? 0 : 1;
      } else if (pass_a) {
        hired = 0;
      } else if (pass_b) {
        hired = 1;
      }

      State best_type = (wa == State::H || wb == State::H) ? State::H : State::L;
      if (hired == 0) {
        ++p.hire_a;
        if (wa == State::H) ++p.hire_a_and_h;
        if (wa == State::H) ++p.hire_h;
        if (wa == best_type) ++p.best;
      } else if (hired == 1) {
        ++p.hire_b;
        if (wb == State::H) ++p.hire_h;
        if (wb == best_type) ++p.best;
      } else {
        ++p.no_hire;
        if (!apply_a && !apply_b) ++p.best;
      }
    }
    parts[c] = p;
  });

  BiasedSimReport rep;
  rep.n = n;
  for (const Partial& p : parts) {
    rep.hire_a += p.hire_a;
    rep.hire_b += p.hire_b;
    rep.hire_a_and_h += p.hire_a_and_h;
    rep.hire_h += p.hire_h;
    rep.best += p.best;
    rep.no_hire += p.no_hire;
  }
  return rep;
}

}  // namespace gklab::mc
