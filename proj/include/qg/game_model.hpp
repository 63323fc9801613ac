#pragma once

#include <cstdint>
#include <vector>

#include "qg/errors.hpp"

namespace qg {

// Players are 0-indexed internally and 1-indexed in all external formats.
// A coalition is a bitset over players: bit n set means player n quits.
struct Coalition {
  std::uint32_t mask = 0;

  bool contains(int player) const { return (mask >> player) & 1u; }
  bool empty() const { return mask == 0; }
  int size() const { return __builtin_popcount(mask); }

  static Coalition single(int player) { return {1u << player}; }
  static Coalition all(int num_players) {
    return {num_players >= 32 ? ~0u : (1u << num_players) - 1u};
  }

  bool operator==(const Coalition&) const = default;
};

// Quitting game: each stage every player continues or quits; the first
// nonempty quitting coalition S ends play with payoff vector r_S; if nobody
// ever quits everyone gets 0.  Payoffs are stored per coalition bitmask;
// slot 0 (the empty coalition) is kept identically zero.
struct QuittingGame {
  int num_players = 0;
  std::vector<std::vector<double>> payoffs;  // size 1 << num_players

  const std::vector<double>& payoff(Coalition s) const { return payoffs[s.mask]; }
  double payoff(Coalition s, int player) const { return payoffs[s.mask][player]; }

  bool operator==(const QuittingGame&) const = default;
};

// One-step game: same absorption payoffs, but the all-continue outcome pays
// the fixed vector v instead of continuing play.
struct OneStepGame {
  QuittingGame game;
  std::vector<double> v;

  int num_players() const { return game.num_players; }

  bool operator==(const OneStepGame&) const = default;
};

// Per-player quit probabilities for a single stage, each in [0,1].
struct MixedProfile {
  std::vector<double> probs;

  int num_players() const { return static_cast<int>(probs.size()); }
  bool is_pure() const;
  bool is_zero() const;

  bool operator==(const MixedProfile&) const = default;
};

// Stage-dependent strategy profile that is eventually cyclic: finitely many
// prefix stages followed by a forever-repeating cycle (cycle never empty).
struct EventuallyCyclicProfile {
  std::vector<MixedProfile> prefix;
  std::vector<MixedProfile> cycle;

  int num_players() const { return cycle.front().num_players(); }
  long period() const { return static_cast<long>(prefix.size() + cycle.size()); }

  bool operator==(const EventuallyCyclicProfile&) const = default;
};

// Profile played at stage k (1-indexed).
const MixedProfile& stage_profile(const EventuallyCyclicProfile& pi, long k);

// Profile seen from stage j onward (j >= 1): drops j-1 stages, folding any
// dropped cycle stages into a rotation of the cycle.
EventuallyCyclicProfile subgame_profile(const EventuallyCyclicProfile& pi, long j);

// Structural checks; throw Error on violation.
void check_game(const QuittingGame& g);
void check_one_step(const OneStepGame& g);
void check_profile_stage(const MixedProfile& p, int num_players);
void check_profile(const EventuallyCyclicProfile& pi, int num_players);

// Largest absorption magnitude: max over nonempty S and players n of |r_S^n|.
double r_max(const QuittingGame& g);

}  // namespace qg
