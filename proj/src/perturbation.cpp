#include "qg/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qg {

MixedProfile perturb(const MixedProfile& p, int player, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    fail("BadLambda", "lambda must lie in [0,1], got " + std::to_string(lambda));
  if (player < 0 || player >= p.num_players())
    fail("BadPlayerIndex", "player index out of range");
  MixedProfile out = p;
  out.probs[player] = (1.0 - lambda) * p.probs[player] + lambda;
  return out;
}

PerturbationReport theorem1_report(const OneStepGame& g, const MixedProfile& p, int player,
                                   double lambda, double eta) {
  PerfectnessReport base = perfectness_report(g, p);
  if (base.epsilon_star > eta + 1e-10)
    fail("NotEtaPerfect", "profile violates the claimed eta by " +
                              std::to_string(base.epsilon_star - eta));

  PerturbationReport rep;
  rep.eta = eta;
  rep.p_hat = perturb(p, player, lambda);
  rep.gamma_p = one_step_payoff(g, p);
  rep.gamma_hat = one_step_payoff(g, rep.p_hat);
  GameConstants c = game_constants(g);
  int n = g.num_players();

  rep.continue_prob = rho(p, Coalition{});
  rep.continue_prob_hat = rho(rep.p_hat, Coalition{});
  rep.continue_prob_ratio = rep.continue_prob > 0.0
                                ? rep.continue_prob_hat / rep.continue_prob
                                : 1.0 - lambda;
  rep.item1_residual =
      std::abs(rep.continue_prob_hat - (1.0 - lambda) * rep.continue_prob);
  rep.item1_ok = rep.item1_residual <= 1e-12;

  std::vector<double> gamma_quit = payoff_with_pure_action(g, p, player, 1);
  for (int i = 0; i < n; ++i) {
    double mixed = (1.0 - lambda) * rep.gamma_p[i] + lambda * gamma_quit[i];
    rep.payoff_mix_residual = std::max(rep.payoff_mix_residual,
                                       std::abs(rep.gamma_hat[i] - mixed));
    rep.payoff_shift = std::max(rep.payoff_shift,
                                std::abs(rep.gamma_hat[i] - rep.gamma_p[i]));
  }
  rep.item2_ok = rep.payoff_mix_residual <= 1e-10;

  rep.shift_bound = lambda * (c.r_max + c.delta_v);
  rep.item3_ok = rep.payoff_shift <= rep.shift_bound + 1e-10;

  rep.eta_tilde = std::max(2.0 * lambda * c.r_max + (1.0 - lambda) * eta, eta);
  PerfectnessReport hat = perfectness_report(g, rep.p_hat);
  rep.m_diff_hat = hat.diff[player];
  rep.item4_partial = p.probs[player] == 0.0;
  rep.perfectness_eps_hat = 0.0;
  for (int i = 0; i < n; ++i) {
    if (rep.item4_partial && i == player) continue;
    rep.perfectness_eps_hat = std::max(rep.perfectness_eps_hat, hat.violation[i]);
  }
  rep.item4_ok = rep.perfectness_eps_hat <= rep.eta_tilde + 1e-10;
  return rep;
}

}  // namespace qg
