#pragma once

#include <vector>

#include "qg/game_model.hpp"

namespace qg {

// Probability that, for one stage played under p, exactly the players in s
// quit:  rho(p,s) = prod_{n in s} p^n * prod_{m not in s} (1 - p^m).
// Factors are multiplied in ascending player order.
double rho(const MixedProfile& p, Coalition s);

// Full distribution over quitting coalitions, indexed by coalition mask.
// mass[s] equals rho(p,s) bit-for-bit; the masses sum to 1.
struct CoalitionDistribution {
  int num_players = 0;
  std::vector<double> mass;  // size 1 << num_players

  double operator[](Coalition s) const { return mass[s.mask]; }
};

CoalitionDistribution coalition_distribution(const MixedProfile& p);

// Split of rho(p,s) along player i:
//   rho(p,s) = p^i * rho((p^-i,1),s) + (1-p^i) * rho((p^-i,0),s),
// where exactly one addend is nonzero depending on whether i is in s.
struct RhoSplit {
  double quit_part = 0.0;  // p^i * rho((p^-i,1), s)
  double stay_part = 0.0;  // (1-p^i) * rho((p^-i,0), s)
};

RhoSplit rho_decompose(const MixedProfile& p, Coalition s, int player);

}  // namespace qg
