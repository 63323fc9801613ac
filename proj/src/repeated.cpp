#include "qg/repeated.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qg {

namespace {

struct StageStats {
  double c = 0.0;          // continue probability
  std::vector<double> u;   // absorption payoff term
};

StageStats stage_stats(const QuittingGame& g, const MixedProfile& p) {
  CoalitionDistribution d = coalition_distribution(p);
  StageStats s;
  s.c = d.mass[0];
  s.u.assign(g.num_players, 0.0);
  for (std::size_t mask = 1; mask < d.mass.size(); ++mask) {
    double w = d.mass[mask];
    const auto& r = g.payoffs[mask];
    for (int i = 0; i < g.num_players; ++i) s.u[i] += w * r[i];
  }
  return s;
}

// Opponent-coalition stats for a deviating player at one stage.
struct DevStage {
  double q = 0.0;  // value of quitting now
  double a = 0.0;  // absorption by the others while continuing
  double b = 0.0;  // probability everyone else continues
};

DevStage dev_stage(const QuittingGame& g, const MixedProfile& p, int player) {
  int n = g.num_players;
  // Masses over coalitions of the other players, built like
  // coalition_distribution but with the deviator's bit left out.
  std::vector<double> mass(std::size_t{1} << n, 0.0);
  mass[0] = 1.0;
  std::vector<std::size_t> filled{0};
  for (int i = 0; i < n; ++i) {
    if (i == player) continue;
    std::size_t block = std::size_t{1} << i;
    std::size_t count = filled.size();
    for (std::size_t k = 0; k < count; ++k) {
      std::size_t m = filled[k];
      mass[m | block] = mass[m] * p.probs[i];
      mass[m] = mass[m] * (1.0 - p.probs[i]);
      filled.push_back(m | block);
    }
  }
  DevStage out;
  std::sort(filled.begin(), filled.end());
  std::size_t bit = std::size_t{1} << player;
  for (std::size_t m : filled) {
    out.q += mass[m] * g.payoffs[m | bit][player];
    if (m == 0)
      out.b = mass[0];
    else
      out.a += mass[m] * g.payoffs[m][player];
  }
  return out;
}

}  // namespace

RepeatedPayoffResult repeated_payoff(const QuittingGame& g, const EventuallyCyclicProfile& pi) {
  int n = g.num_players;
  RepeatedPayoffResult res;
  res.payoff.assign(n, 0.0);
  double weight = 1.0;  // probability no coalition quit before the current stage
  for (const auto& p : pi.prefix) {
    StageStats s = stage_stats(g, p);
    for (int i = 0; i < n; ++i) res.payoff[i] += weight * s.u[i];
    weight *= s.c;
  }
  double prefix_weight = weight;

  double cycle_weight = 1.0;
  std::vector<double> cycle_sum(n, 0.0);
  for (const auto& p : pi.cycle) {
    StageStats s = stage_stats(g, p);
    for (int i = 0; i < n; ++i) cycle_sum[i] += cycle_weight * s.u[i];
    cycle_weight *= s.c;
  }
  res.per_cycle_continue = cycle_weight;
  if (cycle_weight < 1.0) {
    double scale = prefix_weight / (1.0 - cycle_weight);
    for (int i = 0; i < n; ++i) res.payoff[i] += scale * cycle_sum[i];
    res.termination_prob = 1.0;
  } else {
    // Nobody ever quits inside the cycle; play continues forever and the
    // non-terminating path pays 0.
    res.termination_prob = 1.0 - prefix_weight;
  }
  return res;
}

TruncatedPayoff truncated_payoff(const QuittingGame& g, const EventuallyCyclicProfile& pi,
                                 long horizon) {
  if (horizon < 0) fail("BadHorizon", "horizon must be >= 0");
  int n = g.num_players;
  TruncatedPayoff res;
  res.payoff.assign(n, 0.0);
  double weight = 1.0;
  for (long k = 1; k <= horizon; ++k) {
    StageStats s = stage_stats(g, stage_profile(pi, k));
    for (int i = 0; i < n; ++i) res.payoff[i] += weight * s.u[i];
    weight *= s.c;
  }
  res.tail_bound = weight * r_max(g);
  return res;
}

DeviationResult best_response(const QuittingGame& g, const EventuallyCyclicProfile& pi,
                              int player) {
  if (player < 0 || player >= g.num_players)
    fail("BadPlayerIndex", "player index out of range");
  std::size_t np = pi.prefix.size();
  std::size_t nc = pi.cycle.size();

  std::vector<DevStage> pre(np), cyc(nc);
  for (std::size_t k = 0; k < np; ++k) pre[k] = dev_stage(g, pi.prefix[k], player);
  for (std::size_t k = 0; k < nc; ++k) cyc[k] = dev_stage(g, pi.cycle[k], player);

  double prod_b = 1.0;
  for (const auto& s : cyc) prod_b *= s.b;

  std::vector<double> v_cycle(nc, 0.0);
  if (prod_b == 1.0) {
    // The others never quit on the cycle, so waiting forever (payoff 0) and
    // quitting at the best stage class are the only options.
    double best = 0.0;
    for (const auto& s : cyc) best = std::max(best, s.q);
    v_cycle.assign(nc, best);
  } else {
    const double tol = 1e-12;
    const long max_sweeps = 1000000;
    long sweep = 0;
    double residual = 0.0;
    std::vector<double> next(nc, 0.0);
    for (; sweep < max_sweeps; ++sweep) {
      residual = 0.0;
      for (std::size_t k = 0; k < nc; ++k) {
        double cont = cyc[k].a + cyc[k].b * v_cycle[(k + 1) % nc];
        next[k] = std::max(cyc[k].q, cont);
        residual = std::max(residual, std::abs(next[k] - v_cycle[k]));
      }
      v_cycle.swap(next);
      if (residual <= tol) break;
    }
    if (sweep == max_sweeps)
      fail("ConvergenceFailure",
           "cycle value iteration stalled with residual " + std::to_string(residual));
  }

  DeviationResult res;
  res.player = player;
  res.best_policy.assign(np + nc, 0);
  for (std::size_t k = 0; k < nc; ++k) {
    double cont = cyc[k].a + cyc[k].b * v_cycle[(k + 1) % nc];
    res.best_policy[np + k] = cyc[k].q >= cont ? 1 : 0;
  }
  double value = v_cycle.empty() ? 0.0 : v_cycle[0];
  for (std::size_t k = np; k-- > 0;) {
    double cont = pre[k].a + pre[k].b * value;
    res.best_policy[k] = pre[k].q >= cont ? 1 : 0;
    value = std::max(pre[k].q, cont);
  }
  res.best_value = value;
  return res;
}

RepeatedCertificate equilibrium_certificate_repeated(const QuittingGame& g,
                                                     const EventuallyCyclicProfile& pi) {
  RepeatedCertificate cert;
  cert.payoff = repeated_payoff(g, pi).payoff;
  int n = g.num_players;
  cert.best_value.resize(n);
  cert.gap.resize(n);
  for (int i = 0; i < n; ++i) {
    cert.best_value[i] = best_response(g, pi, i).best_value;
    cert.gap[i] = std::max(0.0, cert.best_value[i] - cert.payoff[i]);
    cert.epsilon_star = std::max(cert.epsilon_star, cert.gap[i]);
  }
  return cert;
}

SubgameCertificate subgame_certificate(const QuittingGame& g,
                                       const EventuallyCyclicProfile& pi) {
  SubgameCertificate cert;
  long shifts = pi.period();
  cert.shift_epsilon.reserve(shifts);
  for (long j = 1; j <= shifts; ++j) {
    double eps = equilibrium_certificate_repeated(g, subgame_profile(pi, j)).epsilon_star;
    cert.shift_epsilon.push_back(eps);
    cert.epsilon_star = std::max(cert.epsilon_star, eps);
  }
  return cert;
}

}  // namespace qg
