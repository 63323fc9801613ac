#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "qg/game_model.hpp"

namespace qgtest {

// Two-player game builder: payoffs for {1}, {2}, {1,2} in that order.
inline qg::QuittingGame game2(std::vector<double> r1, std::vector<double> r2,
                              std::vector<double> r12) {
  qg::QuittingGame g;
  g.num_players = 2;
  g.payoffs = {{0.0, 0.0}, std::move(r1), std::move(r2), std::move(r12)};
  return g;
}

// Joint quitting is punished; each player prefers to quit alone.
inline qg::QuittingGame penalty_game() {
  return game2({1.0, -1.0}, {1.0, 1.0}, {-2.0, -2.0});
}

// Asymmetric absorption payoffs; pairs with v = (9/10, 10/9).
inline qg::QuittingGame tilted_game() {
  return game2({1.0, -1.0}, {0.5, 1.0}, {-1.0, 1.0});
}

// Witnesses that the payoff shift under perturbation can exceed 2*lambda*r_max;
// pairs with v = (1, 2).
inline qg::QuittingGame tight_shift_game() {
  return game2({1.0, -1.0}, {0.0, 1.0}, {-1.0, -0.5});
}

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline bool all_close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!close(a[i], b[i], tol)) return false;
  return true;
}

inline double inf_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline qg::QuittingGame random_game(std::mt19937_64& rng, int n, double scale = 2.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  qg::QuittingGame g;
  g.num_players = n;
  g.payoffs.assign(std::size_t{1} << n, std::vector<double>(n, 0.0));
  for (std::size_t mask = 1; mask < g.payoffs.size(); ++mask)
    for (int i = 0; i < n; ++i) g.payoffs[mask][i] = u(rng);
  return g;
}

// Quit probability drawn from {0, 1, interior}; interior values stay away
// from the boundaries so conversion factors remain moderate.
inline double random_prob(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double pick = u(rng);
  if (pick < 0.2) return 0.0;
  if (pick < 0.4) return 1.0;
  return 0.02 + 0.96 * u(rng);
}

inline qg::MixedProfile random_profile(std::mt19937_64& rng, int n) {
  qg::MixedProfile p;
  p.probs.resize(n);
  for (double& x : p.probs) x = random_prob(rng);
  return p;
}

inline qg::EventuallyCyclicProfile random_cyclic(std::mt19937_64& rng, int n, int max_prefix = 2,
                                                 int max_cycle = 3) {
  std::uniform_int_distribution<int> pre(0, max_prefix), cyc(1, max_cycle);
  qg::EventuallyCyclicProfile pi;
  int np = pre(rng), nc = cyc(rng);
  for (int i = 0; i < np; ++i) pi.prefix.push_back(random_profile(rng, n));
  for (int i = 0; i < nc; ++i) pi.cycle.push_back(random_profile(rng, n));
  return pi;
}

inline qg::EventuallyCyclicProfile stationary(std::vector<double> probs) {
  return {{}, {qg::MixedProfile{std::move(probs)}}};
}

// Random game satisfying the payoff-region construction's assumptions:
// quitting alone pays the quitter 1 and no coalition pays a member more
// than 1.
inline qg::QuittingGame random_assumption_game(std::mt19937_64& rng, int n) {
  qg::QuittingGame g = random_game(rng, n);
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask)
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1u) {
        g.payoffs[mask][i] = std::min(g.payoffs[mask][i], 1.0);
        if (mask == (1u << i)) g.payoffs[mask][i] = 1.0;
      }
  return g;
}

// Random vector in the target box: every |v^n| <= 2 r_max and at least one
// component <= 1.
inline std::vector<double> random_target_vector(std::mt19937_64& rng, const qg::QuittingGame& g) {
  double rmax = qg::r_max(g);
  std::uniform_real_distribution<double> u(-2.0 * rmax, 2.0 * rmax);
  std::vector<double> v(g.num_players);
  for (double& x : v) x = u(rng);
  std::uniform_int_distribution<int> pick(0, g.num_players - 1);
  int low = pick(rng);
  v[low] = std::min(v[low], 1.0 - 0.5 * std::abs(u(rng)));
  return v;
}

}  // namespace qgtest
