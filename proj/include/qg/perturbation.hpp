#pragma once

#include <vector>

#include "qg/one_step.hpp"

namespace qg {

// Shift player m's quit probability toward 1:
//   p_hat = (p^-m, (1-lambda) p^m + lambda),   lambda in [0,1].
MixedProfile perturb(const MixedProfile& p, int player, double lambda);

// Verified effects of the perturbation on an eta-stationary profile:
//   (1) rho(p_hat,empty) = (1-lambda) rho(p,empty)
//   (2) gamma_v(p_hat) = (1-lambda) gamma_v(p) + lambda gamma_v((p^-m,1))
//   (3) max_n |gamma_v^n(p_hat) - gamma_v^n(p)| <= lambda (r_max + delta_v)
//   (4) p_hat stays eta_tilde-stationary with
//       eta_tilde = max(2 lambda r_max + (1-lambda) eta, eta);
//       for p^m = 0 the guarantee covers players n != m two-sidedly and
//       player m only from above (item4_partial is set).
struct PerturbationReport {
  MixedProfile p_hat;
  std::vector<double> gamma_p;
  std::vector<double> gamma_hat;

  double continue_prob = 0.0;        // rho(p, empty)
  double continue_prob_hat = 0.0;    // rho(p_hat, empty)
  double continue_prob_ratio = 0.0;  // hat/plain; (1-lambda) by convention if plain is 0
  double item1_residual = 0.0;

  double payoff_mix_residual = 0.0;

  double payoff_shift = 0.0;
  double shift_bound = 0.0;  // lambda (r_max + delta_v)

  double eta = 0.0;
  double eta_tilde = 0.0;
  double perfectness_eps_hat = 0.0;  // over all players, or over n != m when partial
  double m_diff_hat = 0.0;           // diff of player m at p_hat
  bool item4_partial = false;

  bool item1_ok = false;
  bool item2_ok = false;
  bool item3_ok = false;
  bool item4_ok = false;
};

PerturbationReport theorem1_report(const OneStepGame& g, const MixedProfile& p, int player,
                                   double lambda, double eta);

}  // namespace qg
