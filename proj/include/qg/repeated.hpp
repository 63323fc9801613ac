#pragma once

#include <vector>

#include "qg/game_model.hpp"
#include "qg/probability.hpp"

namespace qg {

// Expected payoff of an eventually cyclic profile.  With per-stage continue
// probability c_k = rho(p_k,empty) and absorption term
// u_k = sum_{S nonempty} rho(p_k,S) r_S, the prefix accumulates directly and
// the cycle sums in closed form through the geometric series
//   sum_{m>=0} C^m = 1/(1-C),   C = prod_cycle c_k,
// while a never-absorbing cycle (C = 1) contributes 0.
struct RepeatedPayoffResult {
  std::vector<double> payoff;
  double termination_prob = 0.0;
  double per_cycle_continue = 0.0;  // C
};

RepeatedPayoffResult repeated_payoff(const QuittingGame& g, const EventuallyCyclicProfile& pi);

// Partial sum over stages 1..horizon plus the exact bound
//   tail_bound = prod_{k<=horizon} c_k * r_max
// on everything the truncation ignores.
struct TruncatedPayoff {
  std::vector<double> payoff;
  double tail_bound = 0.0;
};

TruncatedPayoff truncated_payoff(const QuittingGame& g, const EventuallyCyclicProfile& pi,
                                 long horizon);

// Best stage-dependent reply of one player against the others frozen at pi.
// With opponent masses rho_-n over coalitions S not containing n,
//   Q_k = sum_S rho_-n(p_k,S) r^n_{S+n}         (quit now)
//   A_k = sum_{S nonempty} rho_-n(p_k,S) r^n_S  (absorbed by others)
//   B_k = rho_-n(p_k,empty)                     (everyone continues)
// the stage values satisfy V_k = max(Q_k, A_k + B_k V_{k+1}) cyclically.
// When prod_cycle B_k < 1 the cycle values are the unique fixed point,
// found by iterating to 1e-12 (at most 1e6 sweeps, else ConvergenceFailure);
// when prod_cycle B_k = 1 never stopping is possible and the value is
// max(0, max_k Q_k).  best_policy lists the deviator's pure action per stage
// class (prefix stages, then cycle stages); ties resolve to quit.
struct DeviationResult {
  int player = 0;
  double best_value = 0.0;
  std::vector<int> best_policy;
};

DeviationResult best_response(const QuittingGame& g, const EventuallyCyclicProfile& pi,
                              int player);

// Deviation gaps against the repeated payoff; epsilon_star is the smallest
// eps >= 0 making pi an eps-equilibrium of the quitting game.
struct RepeatedCertificate {
  std::vector<double> payoff;
  std::vector<double> best_value;
  std::vector<double> gap;  // max(0, best_value - payoff)
  double epsilon_star = 0.0;
};

RepeatedCertificate equilibrium_certificate_repeated(const QuittingGame& g,
                                                     const EventuallyCyclicProfile& pi);

// Worst equilibrium gap over every stage shift of pi (one shift per prefix
// stage and per cycle class covers all distinct subgames).
struct SubgameCertificate {
  std::vector<double> shift_epsilon;  // indexed by shift j-1
  double epsilon_star = 0.0;
};

SubgameCertificate subgame_certificate(const QuittingGame& g, const EventuallyCyclicProfile& pi);

}  // namespace qg
