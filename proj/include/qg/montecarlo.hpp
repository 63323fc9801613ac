#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "qg/game_model.hpp"

namespace qg {

// SplitMix64 stream; each simulation trial gets its own state derived from
// (seed, trial index), so results are identical for any worker count.
struct SplitMix64 {
  std::uint64_t state = 0;

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform draw from [0,1) with 53 random bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // The counter state passes through one mixing round so per-trial streams
  // start at decorrelated points instead of forming shifted copies of one
  // sequence.
  static SplitMix64 for_trial(std::uint64_t seed, std::uint64_t trial) {
    SplitMix64 seeder{seed + 0x9E3779B97F4A7C15ull * (trial + 1)};
    return {seeder.next()};
  }
};

// Play pi for up to `horizon` stages per trial.  Each stage draws one
// uniform per player in player order; the first nonempty quitting coalition
// pays r_S.  Trials that outlast the horizon pay 0 and count as
// non-terminated (censored).
struct SimulationSummary {
  long trials = 0;
  long horizon = 0;
  std::uint64_t seed = 0;
  std::vector<double> mean_payoff;
  std::vector<double> stderr_payoff;
  double termination_rate = 0.0;
  std::map<long, long> quit_stage_histogram;
};

// Trials are split into fixed-size chunks; chunk results are combined in
// chunk order, so the summary is bit-identical for every `threads` value.
SimulationSummary simulate(const QuittingGame& g, const EventuallyCyclicProfile& pi,
                           long trials, long horizon, std::uint64_t seed, int threads = 1);

}  // namespace qg
