#include "qg/one_step.hpp"

#include <algorithm>
#include <cmath>

namespace qg {

namespace {

constexpr double kBoundaryWarn = 1e-12;
constexpr double kSlack = 1e-10;

}  // namespace

std::vector<double> one_step_payoff(const OneStepGame& g, const MixedProfile& p) {
  int n = g.num_players();
  if (p.num_players() != n)
    fail("BadVectorLength", "profile length does not match the game");
  CoalitionDistribution d = coalition_distribution(p);
  std::vector<double> out(n, 0.0);
  for (std::size_t mask = 0; mask < d.mass.size(); ++mask) {
    double w = d.mass[mask];
    const std::vector<double>& r = mask == 0 ? g.v : g.game.payoffs[mask];
    for (int i = 0; i < n; ++i) out[i] += w * r[i];
  }
  return out;
}

std::vector<double> payoff_with_pure_action(const OneStepGame& g, const MixedProfile& p,
                                            int player, int action) {
  MixedProfile q = p;
  q.probs[player] = action ? 1.0 : 0.0;
  return one_step_payoff(g, q);
}

PerfectnessReport perfectness_report(const OneStepGame& g, const MixedProfile& p) {
  int n = g.num_players();
  PerfectnessReport rep;
  rep.diff.resize(n);
  rep.support.resize(n);
  rep.violation.resize(n);
  for (int i = 0; i < n; ++i) {
    double quit = payoff_with_pure_action(g, p, i, 1)[i];
    double stay = payoff_with_pure_action(g, p, i, 0)[i];
    rep.diff[i] = quit - stay;
    double x = p.probs[i];
    if (x == 0.0) {
      rep.support[i] = SupportClass::AtZero;
      rep.violation[i] = std::max(0.0, rep.diff[i]);
    } else if (x == 1.0) {
      rep.support[i] = SupportClass::AtOne;
      rep.violation[i] = std::max(0.0, -rep.diff[i]);
    } else {
      rep.support[i] = SupportClass::Interior;
      rep.violation[i] = std::abs(rep.diff[i]);
      if (x < kBoundaryWarn || 1.0 - x < kBoundaryWarn)
        rep.warnings.push_back("player " + std::to_string(i + 1) +
                               " is within 1e-12 of a pure action but classified Interior");
    }
    rep.epsilon_star = std::max(rep.epsilon_star, rep.violation[i]);
  }
  return rep;
}

EquilibriumCertificate equilibrium_certificate(const OneStepGame& g, const MixedProfile& p) {
  int n = g.num_players();
  EquilibriumCertificate cert;
  cert.current = one_step_payoff(g, p);
  cert.best_deviation.resize(n);
  cert.gap.resize(n);
  for (int i = 0; i < n; ++i) {
    double stay = payoff_with_pure_action(g, p, i, 0)[i];
    double quit = payoff_with_pure_action(g, p, i, 1)[i];
    cert.best_deviation[i] = std::max(stay, quit);
    cert.gap[i] = cert.best_deviation[i] - cert.current[i];
    cert.epsilon_star = std::max(cert.epsilon_star, cert.gap[i]);
  }
  cert.epsilon_star = std::max(cert.epsilon_star, 0.0);
  return cert;
}

ConversionReport convert_certificates(const OneStepGame& g, const MixedProfile& p) {
  PerfectnessReport perf = perfectness_report(g, p);
  EquilibriumCertificate eq = equilibrium_certificate(g, p);
  ConversionReport rep;
  rep.equilibrium_eps = eq.epsilon_star;
  rep.perfectness_eps = perf.epsilon_star;
  int n = g.num_players();
  rep.players.resize(n);
  for (int i = 0; i < n; ++i) {
    PlayerConversion& pc = rep.players[i];
    pc.support = perf.support[i];
    pc.diff = perf.diff[i];
    double x = p.probs[i];
    switch (pc.support) {
      case SupportClass::AtZero:
        pc.xi = 1.0;
        pc.diff_lo = -HUGE_VAL;
        pc.diff_hi = eq.epsilon_star;
        break;
      case SupportClass::AtOne:
        pc.xi = 1.0;
        pc.diff_lo = -eq.epsilon_star;
        pc.diff_hi = HUGE_VAL;
        break;
      case SupportClass::Interior:
        pc.xi = std::max(1.0 / x, 1.0 / (1.0 - x));
        pc.diff_lo = -eq.epsilon_star / x;
        pc.diff_hi = eq.epsilon_star / (1.0 - x);
        break;
    }
    pc.within = pc.diff >= pc.diff_lo - kSlack && pc.diff <= pc.diff_hi + kSlack;
    rep.xi_p = std::max(rep.xi_p, pc.xi);
  }
  rep.forward_holds = rep.equilibrium_eps <= rep.perfectness_eps + kSlack;
  rep.backward_holds = rep.perfectness_eps <= rep.xi_p * rep.equilibrium_eps + kSlack;
  return rep;
}

GameConstants game_constants(const OneStepGame& g) {
  GameConstants c;
  c.r_max = r_max(g.game);
  c.delta_v = c.r_max;
  for (double x : g.v) c.delta_v = std::max(c.delta_v, std::abs(x));
  return c;
}

}  // namespace qg
