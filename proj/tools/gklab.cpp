#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gklab/biased_duel.hpp"
#include "gklab/mc_oracle.hpp"
#include "gklab/solo_game.hpp"
#include "gklab/strategic_keeper.hpp"

namespace {

using nlohmann::json;
using namespace gklab;

constexpr int kExitInvalid = 2;
constexpr int kExitIo = 3;

// CSV cells carry 6 significant digits so sweep outputs are byte-stable.
std::string sig6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct GridSpec {
  double min = 0.0, max = 0.0;
  int steps = 0;

  void validate(const char* name) const {
    if (steps < 2) throw std::invalid_argument(std::string(name) + ": steps must be >= 2");
    if (!(min < max)) throw std::invalid_argument(std::string(name) + ": min must be < max");
  }
  double at(int i) const {
    return min + (max - min) * static_cast<double>(i) / (steps - 1);
  }
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // LF line endings on every platform
  if (!out) throw std::ios_base::failure("cannot open output file: " + path);
  return out;
}

struct SoloFlags {
  double mu = 0.5, q = 0.75, gamma = 0.4, phi = 0.6, alpha = 0.5, d = 1.0;

  SoloMarket market() const {
    SoloMarket m{mu, q, gamma, phi, alpha, d};
    m.validate();
    return m;
  }
  void add_to(CLI::App* cmd, bool with_q = true) {
    cmd->add_option("--mu", mu, "prior Pr(H)");
    if (with_q) cmd->add_option("--q", q, "gatekeeper signal quality");
    cmd->add_option("--gamma", gamma, "candidate test cost");
    cmd->add_option("--phi", phi, "low-type test pass probability");
    cmd->add_option("--alpha", alpha, "low-type hire utility");
    cmd->add_option("--d", d, "gatekeeper disutility for a hired low type");
  }
  json params_json(bool with_q = true) const {
    json p{{"mu", mu}, {"gamma", gamma}, {"phi", phi}, {"alpha", alpha}, {"d", d}};
    if (with_q) p["q"] = q;
    return p;
  }
};

int run_solo(const SoloFlags& flags, bool as_json) {
  SoloMarket m = flags.market();
  double x_hat = solo::baseline_threshold(m).x;
  double x_q = solo::mechanical_threshold(m).x;
  CorrectnessReport cr = solo::mechanical_correctness(m);
  RegimeResult rr = solo::regime_classify(m);
  const char* regime =
      rr.regime == CorrectnessRegime::LowQualityHelps ? "low-quality-helps"
                                                      : "low-quality-hurts";
  if (as_json) {
    json out{{"params", flags.params_json()},
             {"x_hat", x_hat},
             {"x_q", x_q},
             {"theta_hat", cr.theta_baseline},
             {"theta_q", cr.theta},
             {"improvement", cr.improvement},
             {"predictor_lhs", cr.predictor_lhs},
             {"improves", cr.predicted_improves},
             {"regime", regime},
             {"regime_ratio", rr.ratio}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::printf("threshold (no gatekeeper)   x_hat = %.6f\n", x_hat);
    std::printf("threshold (mechanical)       x(q) = %.6f\n", x_q);
    std::printf("correctness (no gatekeeper) theta_hat = %.6f\n", cr.theta_baseline);
    std::printf("correctness (mechanical)    theta(q)  = %.6f\n", cr.theta);
    std::printf("improvement                 %+.6f (%s)\n", cr.improvement,
                cr.predicted_improves ? "improves" : "harms");
    std::printf("improvement predictor lhs   %.6f vs q = %.6f\n", cr.predictor_lhs, m.q);
    std::printf("low-quality regime          %s (ratio %.6f vs phi %.6f)\n", regime,
                rr.ratio, m.phi);
  }
  return 0;
}

int run_correctness_map(const SoloFlags& flags, const GridSpec& mu_grid,
                        const GridSpec& q_grid, const std::string& out_path) {
  mu_grid.validate("mu grid");
  q_grid.validate("q grid");
  auto out = open_output(out_path);
  out << "mu,q,x_hat,x_q,theta_hat,theta_q,improvement,predictor_lhs,improves\n";
  for (int i = 0; i < mu_grid.steps; ++i)
    for (int j = 0; j < q_grid.steps; ++j) {
      SoloFlags cell = flags;
      cell.mu = mu_grid.at(i);
      cell.q = q_grid.at(j);
      SoloMarket m = cell.market();
      CorrectnessReport cr = solo::mechanical_correctness(m);
      out << sig6(m.mu) << ',' << sig6(m.q) << ','
          << sig6(solo::baseline_threshold(m).x) << ','
          << sig6(solo::mechanical_threshold(m).x) << ',' << sig6(cr.theta_baseline)
          << ',' << sig6(cr.theta) << ',' << sig6(cr.improvement) << ','
          << sig6(cr.predictor_lhs) << ',' << (cr.predicted_improves ? 1 : 0) << '\n';
    }
  if (!out) throw std::ios_base::failure("write failed: " + out_path);
  return 0;
}

int run_mu_bar(const SoloFlags& flags, const GridSpec& q_grid,
               const std::vector<double>& gammas, const std::vector<double>& ds,
               const std::string& out_path) {
  q_grid.validate("q grid");
  auto out = open_output(out_path);
  out << "q,gamma,d,mu_bar,flag_nonmonotone\n";
  for (double gamma : gammas)
    for (double d : ds)
      for (int j = 0; j < q_grid.steps; ++j) {
        SoloFlags cell = flags;
        cell.q = q_grid.at(j);
        cell.gamma = gamma;
        cell.d = d;
        cell.mu = 0.5;  // placeholder; mu_bar scans over it
        SoloMarket m = cell.market();
        strategic::MuBarResult r = strategic::mu_bar(m);
        out << sig6(m.q) << ',' << sig6(gamma) << ',' << sig6(d) << ','
            << (r.found ? sig6(r.value) : std::string{}) << ','
            << (r.found ? (r.nonmonotone ? 1 : 0) : 1) << '\n';
      }
  if (!out) throw std::ios_base::failure("write failed: " + out_path);
  return 0;
}

TiePolicy parse_tie(const std::string& name, double rho) {
  if (name == "equal") return TiePolicy::equal_split();
  if (name == "type-conditional") return TiePolicy::type_conditional(rho);
  if (name == "type-invariant") return TiePolicy::type_invariant(rho);
  throw std::invalid_argument("unknown tie policy: " + name);
}

int run_biased(double mu_a, double mu_b, double q_a, double gamma_a, double gamma_b,
               const GridSpec& qb_grid, const std::vector<std::string>& ties,
               double rho, bool strict, const std::string& out_path) {
  qb_grid.validate("q_B grid");
  auto out = open_output(out_path);
  out << "q_B,x_A,x_B,pr_hire_A,pr_hire_A_and_H,pr_hire_H,pr_best,pr_no_hire,"
         "iterations,residual\n";
  for (const std::string& tie_name : ties)
    for (int j = 0; j < qb_grid.steps; ++j) {
      BiasedMarket m;
      m.a = {mu_a, q_a, gamma_a};
      m.b = {mu_b, qb_grid.at(j), gamma_b};
      m.tie = parse_tie(tie_name, rho);
      try {
        BiasedEquilibrium eq = biased::solve_equilibrium(m);
        OutcomeDistribution od = biased::outcome_distribution(m, eq);
        out << sig6(m.b.q) << ',' << sig6(eq.x_a) << ',' << sig6(eq.x_b) << ','
            << sig6(od.pr_hire_a) << ',' << sig6(od.pr_hire_a_and_h) << ','
            << sig6(od.pr_hire_h) << ',' << sig6(od.pr_best) << ','
            << sig6(od.pr_no_hire) << ',' << eq.iterations << ','
            << sig6(eq.residual) << '\n';
      } catch (const std::runtime_error& e) {
        if (strict) throw;
        out << sig6(m.b.q) << ",,,,,,,,,DIVERGED\n";
      }
    }
  if (!out) throw std::ios_base::failure("write failed: " + out_path);
  return 0;
}

json estimate_json(const mc::Estimate& e, double analytic) {
  double z = e.stderr_ > 0.0 ? (e.value - analytic) / e.stderr_ : 0.0;
  return {{"estimate", e.value}, {"stderr", e.stderr_}, {"analytic", analytic}, {"z", z}};
}

int run_simulate_solo(const SoloFlags& flags, const std::string& policy_name,
                      double sigma, std::int64_t n, std::uint64_t seed) {
  SoloMarket m = flags.market();
  GatekeeperPolicy policy;
  if (policy_name == "none")
    policy = GatekeeperPolicy::none();
  else if (policy_name == "mechanical")
    policy = GatekeeperPolicy::mechanical();
  else if (policy_name == "mixed")
    policy = GatekeeperPolicy::mixed(sigma);
  else
    throw std::invalid_argument("unknown policy: " + policy_name);

  mc::SimConfig cfg{seed, n};
  mc::SoloSimReport rep = mc::simulate_solo(m, policy, std::nullopt, cfg);

  double analytic_theta;
  switch (policy.kind) {
    case GatekeeperPolicy::Kind::None:
      analytic_theta = solo::baseline_correctness(m);
      break;
    case GatekeeperPolicy::Kind::Mechanical:
      analytic_theta = solo::mechanical_correctness(m).theta;
      break;
    default:
      analytic_theta = strategic::mixed_correctness(m, sigma);
  }
  json out{{"params", flags.params_json()},
           {"policy", policy_name},
           {"n", n},
           {"seed", seed},
           {"threshold", solo::policy_threshold(m, policy).x},
           {"correctness", estimate_json(rep.correctness(), analytic_theta)},
           {"mean_applicant_quality",
            {{"estimate", rep.mean_applicant_quality()},
             {"analytic", solo::mean_applicant_quality(m, policy)}}},
           {"application_rate", rep.application_rate().value},
           {"mean_candidate_utility", rep.mean_candidate_utility()}};
  if (policy.kind == GatekeeperPolicy::Kind::Mixed) out["sigma"] = sigma;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_simulate_biased(double mu_a, double mu_b, double q_a, double q_b,
                        double gamma_a, double gamma_b, const std::string& tie_name,
                        double rho, std::int64_t n, std::uint64_t seed) {
  BiasedMarket m;
  m.a = {mu_a, q_a, gamma_a};
  m.b = {mu_b, q_b, gamma_b};
  m.tie = parse_tie(tie_name, rho);
  BiasedEquilibrium eq = biased::solve_equilibrium(m);
  OutcomeDistribution od = biased::outcome_distribution(m, eq);

  mc::SimConfig cfg{seed, n};
  mc::BiasedSimReport rep = mc::simulate_biased(m, eq.x_a, eq.x_b, cfg);
  json out{{"params",
            {{"mu_a", mu_a},
             {"mu_b", mu_b},
             {"q_a", q_a},
             {"q_b", q_b},
             {"gamma_a", gamma_a},
             {"gamma_b", gamma_b},
             {"tie", tie_name},
             {"rho", rho}}},
           {"n", n},
           {"seed", seed},
           {"equilibrium", {{"x_a", eq.x_a}, {"x_b", eq.x_b}, {"residual", eq.residual}}},
           {"pr_hire_A", estimate_json(rep.pr_hire_a(), od.pr_hire_a)},
           {"pr_hire_A_and_H", estimate_json(rep.pr_hire_a_and_h(), od.pr_hire_a_and_h)},
           {"pr_hire_H", estimate_json(rep.pr_hire_h(), od.pr_hire_h)},
           {"pr_best", estimate_json(rep.pr_best(), od.pr_best)},
           {"pr_no_hire", estimate_json(rep.pr_no_hire(), od.pr_no_hire)}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gatekeeper screening model laboratory"};
  app.require_subcommand(1);
  // options for a subcommand live under a [subcommand] section of the file
  app.set_config("--config");

  // --- solo ---
  auto* solo_cmd = app.add_subcommand("solo", "one-candidate thresholds and correctness");
  SoloFlags solo_flags;
  bool solo_json = false;
  solo_flags.add_to(solo_cmd);
  solo_cmd->add_flag("--json", solo_json, "emit a JSON object");
  solo_cmd->configurable();

  // --- correctness-map ---
  auto* map_cmd = app.add_subcommand("correctness-map",
                                     "sweep (mu,q) and tabulate the gatekeeper effect");
  SoloFlags map_flags;
  GridSpec map_mu{0.005, 0.995, 100}, map_q{0.5025, 0.9975, 100};
  std::string map_out = "correctness_map.csv";
  map_flags.add_to(map_cmd, /*with_q=*/false);
  map_cmd->add_option("--mu-min", map_mu.min);
  map_cmd->add_option("--mu-max", map_mu.max);
  map_cmd->add_option("--mu-steps", map_mu.steps);
  map_cmd->add_option("--q-min", map_q.min);
  map_cmd->add_option("--q-max", map_q.max);
  map_cmd->add_option("--q-steps", map_q.steps);
  map_cmd->add_option("-o,--output", map_out, "CSV output path");
  map_cmd->configurable();

  // --- mu-bar ---
  auto* mubar_cmd = app.add_subcommand("mu-bar",
                                       "prior threshold above which mechanical "
                                       "gatekeeping stops being a local best response");
  SoloFlags mubar_flags;
  GridSpec mubar_q{0.55, 0.95, 41};
  std::vector<double> mubar_gammas, mubar_ds;
  std::string mubar_out = "mu_bar.csv";
  mubar_cmd->add_option("--phi", mubar_flags.phi);
  mubar_cmd->add_option("--alpha", mubar_flags.alpha);
  mubar_cmd->add_option("--q-min", mubar_q.min);
  mubar_cmd->add_option("--q-max", mubar_q.max);
  mubar_cmd->add_option("--q-steps", mubar_q.steps);
  mubar_cmd->add_option("--gamma", mubar_gammas, "cost values (repeatable)");
  mubar_cmd->add_option("--d", mubar_ds, "disutility values (repeatable)");
  mubar_cmd->add_option("-o,--output", mubar_out, "CSV output path");
  mubar_cmd->configurable();

  // --- biased ---
  auto* biased_cmd =
      app.add_subcommand("biased", "two-candidate equilibrium sweep over q_B");
  double b_mu_a = 0.5, b_mu_b = 0.5, b_q_a = 0.75, b_gamma_a = 0.6, b_gamma_b = 0.6;
  double b_rho = 0.5;
  GridSpec b_qb{0.5, 0.99, 50};
  std::vector<std::string> b_ties;
  bool b_strict = false;
  std::string b_out = "biased.csv";
  biased_cmd->add_option("--mu-a", b_mu_a);
  biased_cmd->add_option("--mu-b", b_mu_b);
  biased_cmd->add_option("--q-a", b_q_a);
  biased_cmd->add_option("--gamma-a", b_gamma_a);
  biased_cmd->add_option("--gamma-b", b_gamma_b);
  biased_cmd->add_option("--qb-min", b_qb.min);
  biased_cmd->add_option("--qb-max", b_qb.max);
  biased_cmd->add_option("--qb-steps", b_qb.steps);
  biased_cmd
      ->add_option("--tie", b_ties, "equal | type-conditional | type-invariant (repeatable)")
      ->check(CLI::IsMember({"equal", "type-conditional", "type-invariant"}));
  biased_cmd->add_option("--rho", b_rho, "tie probability that A wins");
  biased_cmd->add_flag("--strict", b_strict, "fail on equilibrium non-convergence");
  biased_cmd->add_option("-o,--output", b_out, "CSV output path");
  biased_cmd->configurable();

  // --- simulate ---
  auto* sim_cmd = app.add_subcommand("simulate", "seeded Monte Carlo run (JSON report)");
  bool sim_solo = false, sim_biased = false;
  SoloFlags sim_flags;
  std::string sim_policy = "mechanical", sim_tie = "equal";
  double sim_sigma = 0.0, sim_rho = 0.5;
  double sb_mu_a = 0.5, sb_mu_b = 0.5, sb_q_a = 0.75, sb_q_b = 0.75, sb_gamma_a = 0.6,
         sb_gamma_b = 0.6;
  std::int64_t sim_n = 1000000;
  std::uint64_t sim_seed = 0;
  sim_cmd->add_flag("--solo", sim_solo, "simulate the one-candidate game");
  sim_cmd->add_flag("--biased", sim_biased, "simulate the two-candidate game");
  sim_flags.add_to(sim_cmd);
  sim_cmd->add_option("--policy", sim_policy, "none | mechanical | mixed");
  sim_cmd->add_option("--sigma", sim_sigma, "mixing probability for --policy mixed");
  sim_cmd->add_option("--mu-a", sb_mu_a);
  sim_cmd->add_option("--mu-b", sb_mu_b);
  sim_cmd->add_option("--q-a", sb_q_a);
  sim_cmd->add_option("--q-b", sb_q_b);
  sim_cmd->add_option("--gamma-a", sb_gamma_a);
  sim_cmd->add_option("--gamma-b", sb_gamma_b);
  sim_cmd->add_option("--tie", sim_tie);
  sim_cmd->add_option("--rho", sim_rho);
  sim_cmd->add_option("--n", sim_n, "replications");
  sim_cmd->add_option("--seed", sim_seed, "RNG seed");
  sim_cmd->configurable();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    if (*solo_cmd) return run_solo(solo_flags, solo_json);
    if (*map_cmd) return run_correctness_map(map_flags, map_mu, map_q, map_out);
    if (*mubar_cmd) {
      if (mubar_gammas.empty()) mubar_gammas.push_back(0.4);
      if (mubar_ds.empty()) mubar_ds.push_back(1.0);
      return run_mu_bar(mubar_flags, mubar_q, mubar_gammas, mubar_ds, mubar_out);
    }
    if (*biased_cmd) {
      if (b_ties.empty()) b_ties.push_back("equal");
      return run_biased(b_mu_a, b_mu_b, b_q_a, b_gamma_a, b_gamma_b, b_qb, b_ties,
                        b_rho, b_strict, b_out);
    }
    if (*sim_cmd) {
      if (sim_solo == sim_biased)
        throw std::invalid_argument("simulate: pass exactly one of --solo / --biased");
      if (sim_n < 1) throw std::invalid_argument("--n must be >= 1");
      if (sim_solo)
        return run_simulate_solo(sim_flags, sim_policy, sim_sigma, sim_n, sim_seed);
      return run_simulate_biased(sb_mu_a, sb_mu_b, sb_q_a, sb_q_b, sb_gamma_a,
                                 sb_gamma_b, sim_tie, sim_rho, sim_n, sim_seed);
    }
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return 0;
}
