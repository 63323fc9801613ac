#pragma once

#include <string>
#include <vector>

#include "qg/game_model.hpp"
#include "qg/probability.hpp"

namespace qg {

// Expected one-step payoff
//   gamma_v(p) = rho(p,empty) * v + sum_{S nonempty} rho(p,S) * r_S,
// accumulated over coalitions in ascending bitmask order.
std::vector<double> one_step_payoff(const OneStepGame& g, const MixedProfile& p);

// gamma_v((p^-n, b)): payoff when player n replaces p^n by the pure action b.
std::vector<double> payoff_with_pure_action(const OneStepGame& g, const MixedProfile& p,
                                            int player, int action);

enum class SupportClass { AtZero, Interior, AtOne };

// Stationarity check per player on diff_n = gamma^n(quit) - gamma^n(stay):
//   p^n = 0       needs diff_n <= eps,
//   p^n in (0,1)  needs |diff_n| <= eps,
//   p^n = 1       needs diff_n >= -eps.
// epsilon_star is the smallest eps >= 0 satisfying all three cases.
// Support classes compare against exact 0.0 / 1.0; probabilities within
// 1e-12 of a boundary are still Interior but produce a warning.
struct PerfectnessReport {
  std::vector<double> diff;
  std::vector<SupportClass> support;
  std::vector<double> violation;  // per-player required eps
  double epsilon_star = 0.0;
  std::vector<std::string> warnings;
};

PerfectnessReport perfectness_report(const OneStepGame& g, const MixedProfile& p);

// Best pure deviation per player against gamma_v(p); epsilon_star is the
// smallest eps >= 0 such that no player gains more than eps by deviating.
struct EquilibriumCertificate {
  std::vector<double> current;         // gamma_v^n(p)
  std::vector<double> best_deviation;  // max over b in {0,1} of gamma_v^n((p^-n,b))
  std::vector<double> gap;             // best_deviation - current
  double epsilon_star = 0.0;
};

EquilibriumCertificate equilibrium_certificate(const OneStepGame& g, const MixedProfile& p);

// Relation between the two epsilon_star values at a fixed profile:
//   eq_eps <= perf_eps          (stationary implies no profitable deviation)
//   perf_eps <= xi_p * eq_eps   with xi^n = max(1/p^n, 1/(1-p^n)) for interior
//                               p^n and xi^n = 1 at the boundary.
// For interior players the deviation gaps also pin diff_n into
// [-eq_eps/p^n, eq_eps/(1-p^n)]; boundary players get the one-sided case.
struct PlayerConversion {
  SupportClass support = SupportClass::Interior;
  double xi = 1.0;
  double diff = 0.0;
  double diff_lo = 0.0;  // -inf encoded as -HUGE_VAL for p^n = 0
  double diff_hi = 0.0;  // +inf encoded as  HUGE_VAL for p^n = 1
  bool within = true;
};

struct ConversionReport {
  double equilibrium_eps = 0.0;
  double perfectness_eps = 0.0;
  double xi_p = 1.0;
  bool forward_holds = false;   // eq_eps <= perf_eps + 1e-10
  bool backward_holds = false;  // perf_eps <= xi_p * eq_eps + 1e-10
  std::vector<PlayerConversion> players;
};

ConversionReport convert_certificates(const OneStepGame& g, const MixedProfile& p);

// r_max = max_{S nonempty, n} |r_S^n|;  delta_v = max(max_n |v^n|, r_max).
// Every one-step payoff component lies in [-delta_v, delta_v].
struct GameConstants {
  double r_max = 0.0;
  double delta_v = 0.0;
};

GameConstants game_constants(const OneStepGame& g);

}  // namespace qg
