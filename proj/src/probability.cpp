#include "qg/probability.hpp"

namespace qg {

double rho(const MixedProfile& p, Coalition s) {
  double out = 1.0;
  for (int n = 0; n < p.num_players(); ++n)
    out *= s.contains(n) ? p.probs[n] : 1.0 - p.probs[n];
  return out;
}

CoalitionDistribution coalition_distribution(const MixedProfile& p) {
  int n = p.num_players();
  if (n < 1) fail("BadPlayerCount", "profile has no players");
  if (n > 24) fail("TooManyPlayers", "coalition enumeration capped at 24 players");
  CoalitionDistribution d;
  d.num_players = n;
  d.mass.assign(std::size_t{1} << n, 0.0);
  d.mass[0] = 1.0;
  // Extend one player at a time so every mass is a product taken in
  // ascending player order, exactly as rho computes it.
  for (int i = 0; i < n; ++i) {
    std::size_t block = std::size_t{1} << i;
    for (std::size_t mask = 0; mask < block; ++mask) {
      double base = d.mass[mask];
      d.mass[mask | block] = base * p.probs[i];
      d.mass[mask] = base * (1.0 - p.probs[i]);
    }
  }
  return d;
}

RhoSplit rho_decompose(const MixedProfile& p, Coalition s, int player) {
  MixedProfile q = p;
  q.probs[player] = 1.0;
  double with_quit = rho(q, s);
  q.probs[player] = 0.0;
  double with_stay = rho(q, s);
  return {p.probs[player] * with_quit, (1.0 - p.probs[player]) * with_stay};
}

}  // namespace qg
