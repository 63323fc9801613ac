#pragma once

#include <vector>

#include "qg/one_step.hpp"
#include "qg/perturbation.hpp"

namespace qg {

// Equilibrium search for the one-step game, certified by
// equilibrium_certificate.epsilon_star <= eps on every returned profile.
//   (1) all 2^N pure profiles are checked exactly;
//   (2) N = 2: mixed supports solved in closed form from the indifference
//       equations diff_n = 0 (linear in the opponent's probability);
//   (2') N = 3: support enumeration; two interior players reduce to the
//        N = 2 linear case, three interior players to a 1-D root scan;
//   (3) N >= 4: grid seeding (step 0.05 through N = 4, 0.25 for N = 5)
//       refined by damped best-response iteration (step 0.5, capped at 1e4
//       rounds) and polished by Newton on the active support.
// Results are sorted lexicographically and deduplicated within inf-distance
// 1e-6.  An empty result means no equilibrium was certified at eps.
std::vector<MixedProfile> find_one_step_equilibrium(const OneStepGame& g, double eps);

// Picks the smallest-index player m usable as the perturbation target for a
// (near-)equilibrium p:
//   p == 0: m with v^m = 1 (within 1e-9);
//   p != 0: m with p^m > 0 and gamma_v^m(p) <= 1 + 1e-9.
// Raises NoQualifyingPlayer when no player fits.
int select_player_m(const OneStepGame& g, const MixedProfile& p);

// Membership certificate for the eps-indexed payoff region: p_hat is the
// selected equilibrium with player m pushed toward quitting by eps, and the
// checks witness that gamma_v(p_hat) -
//   stays inside the target box with some component <= 1   (in_v)
//   comes from a 2 eps r_max-stationary profile             (perfect_ok)
//   leaves continue probability at most 1 - eps             (continue_ok).
struct PsiChecks {
  bool in_v = false;
  int in_v_witness = -1;  // player with gamma^n(p_hat) <= 1
  bool perfect_ok = false;
  double perfectness_eps = 0.0;
  double perfectness_bound = 0.0;  // 2 eps r_max
  bool continue_ok = false;
  double continue_prob = 0.0;
  double continue_bound = 0.0;  // 1 - eps
};

struct PsiMembershipCertificate {
  double eps = 0.0;
  std::vector<double> v;
  MixedProfile p_source;
  int m = -1;
  MixedProfile p_hat;
  std::vector<double> gamma_hat;
  PsiChecks checks;
  bool valid = false;
};

// Requires r^n_{n} = 1 for every player and v inside the target box
// (|v^n| <= 2 r_max with some v^n <= 1); eps must lie in (0,1).
PsiMembershipCertificate construct_psi_member(const OneStepGame& g, double eps);

}  // namespace qg
