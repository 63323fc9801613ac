#include "qg/game_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qg {

namespace {

bool is_zero_or_one(double x) { return x == 0.0 || x == 1.0; }

}  // namespace

bool MixedProfile::is_pure() const {
  return std::all_of(probs.begin(), probs.end(), is_zero_or_one);
}

bool MixedProfile::is_zero() const {
  return std::all_of(probs.begin(), probs.end(), [](double x) { return x == 0.0; });
}

const MixedProfile& stage_profile(const EventuallyCyclicProfile& pi, long k) {
  long p = static_cast<long>(pi.prefix.size());
  long l = static_cast<long>(pi.cycle.size());
  if (k < 1) fail("BadStageIndex", "stage index must be >= 1, got " + std::to_string(k));
  if (k <= p) return pi.prefix[k - 1];
  return pi.cycle[(k - 1 - p) % l];
}

EventuallyCyclicProfile subgame_profile(const EventuallyCyclicProfile& pi, long j) {
  if (j < 1) fail("BadStageIndex", "shift must be >= 1, got " + std::to_string(j));
  long drop = j - 1;
  long p = static_cast<long>(pi.prefix.size());
  long l = static_cast<long>(pi.cycle.size());
  EventuallyCyclicProfile out;
  if (drop <= p) {
    out.prefix.assign(pi.prefix.begin() + drop, pi.prefix.end());
    out.cycle = pi.cycle;
    return out;
  }
  long r = (drop - p) % l;
  out.cycle.reserve(pi.cycle.size());
  for (long i = 0; i < l; ++i) out.cycle.push_back(pi.cycle[(r + i) % l]);
  return out;
}

void check_game(const QuittingGame& g) {
  if (g.num_players < 1)
    fail("BadPlayerCount", "need at least one player, got " + std::to_string(g.num_players));
  if (g.num_players > 24)
    fail("TooManyPlayers",
         "coalition enumeration capped at 24 players, got " + std::to_string(g.num_players));
  std::size_t want = std::size_t{1} << g.num_players;
  if (g.payoffs.size() != want)
    fail("MissingCoalition", "expected payoffs for all " + std::to_string(want - 1) +
                                 " nonempty coalitions");
  for (std::size_t mask = 0; mask < want; ++mask) {
    const auto& r = g.payoffs[mask];
    if (r.size() != static_cast<std::size_t>(g.num_players))
      fail("BadVectorLength", "payoff vector for coalition mask " + std::to_string(mask) +
                                  " has length " + std::to_string(r.size()));
    for (double x : r) {
      if (!std::isfinite(x)) fail("NonFiniteEntry", "payoff entries must be finite");
      if (mask == 0 && x != 0.0)
        fail("NonZeroEmptyCoalition", "the empty coalition pays the zero vector");
    }
  }
}

void check_one_step(const OneStepGame& g) {
  check_game(g.game);
  if (g.v.size() != static_cast<std::size_t>(g.game.num_players))
    fail("BadVectorLength", "continuation vector v has length " + std::to_string(g.v.size()) +
                                ", expected " + std::to_string(g.game.num_players));
  for (double x : g.v)
    if (!std::isfinite(x)) fail("NonFiniteEntry", "v entries must be finite");
}

void check_profile_stage(const MixedProfile& p, int num_players) {
  if (p.num_players() != num_players)
    fail("BadVectorLength", "stage profile has " + std::to_string(p.num_players()) +
                                " entries, expected " + std::to_string(num_players));
  for (double x : p.probs) {
    if (!std::isfinite(x) || x < 0.0 || x > 1.0)
      fail("BadProbability", "quit probabilities must lie in [0,1]");
  }
}

void check_profile(const EventuallyCyclicProfile& pi, int num_players) {
  if (pi.cycle.empty()) fail("EmptyCycle", "profile cycle must contain at least one stage");
  for (const auto& p : pi.prefix) check_profile_stage(p, num_players);
  for (const auto& p : pi.cycle) check_profile_stage(p, num_players);
}

double r_max(const QuittingGame& g) {
  double m = 0.0;
  for (std::size_t mask = 1; mask < g.payoffs.size(); ++mask)
    for (double x : g.payoffs[mask]) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace qg
