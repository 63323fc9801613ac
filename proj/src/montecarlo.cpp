#include "qg/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <string>

namespace qg {

namespace {

struct ChunkStats {
  std::vector<double> sum;
  std::vector<double> sum_sq;
  long terminated = 0;
  std::map<long, long> histogram;
};

ChunkStats run_chunk(const QuittingGame& g, const EventuallyCyclicProfile& pi, long first,
                     long count, long horizon, std::uint64_t seed) {
  int n = g.num_players;
  ChunkStats cs;
  cs.sum.assign(n, 0.0);
  cs.sum_sq.assign(n, 0.0);
  for (long t = first; t < first + count; ++t) {
    SplitMix64 rng = SplitMix64::for_trial(seed, static_cast<std::uint64_t>(t));
    for (long k = 1; k <= horizon; ++k) {
      const MixedProfile& p = stage_profile(pi, k);
      std::uint32_t quitters = 0;
      for (int i = 0; i < n; ++i)
        if (rng.next_unit() < p.probs[i]) quitters |= 1u << i;
      if (quitters == 0) continue;
      const std::vector<double>& r = g.payoffs[quitters];
      for (int i = 0; i < n; ++i) {
        cs.sum[i] += r[i];
        cs.sum_sq[i] += r[i] * r[i];
      }
      ++cs.terminated;
      ++cs.histogram[k];
      break;
    }
  }
  return cs;
}

}  // namespace

SimulationSummary simulate(const QuittingGame& g, const EventuallyCyclicProfile& pi,
                           long trials, long horizon, std::uint64_t seed, int threads) {
  check_game(g);
  check_profile(pi, g.num_players);
  if (trials < 1) fail("BadTrialCount", "need at least one trial");
  if (horizon < 1) fail("BadHorizon", "horizon must be >= 1");
  if (threads < 1) threads = 1;

  const long chunk_size = 65536;
  long chunks = (trials + chunk_size - 1) / chunk_size;
  std::vector<ChunkStats> stats(chunks);
  std::atomic<long> next_chunk{0};
  auto worker = [&]() {
    while (true) {
      long c = next_chunk.fetch_add(1);
      if (c >= chunks) return;
      long first = c * chunk_size;
      long count = std::min(chunk_size, trials - first);
      stats[c] = run_chunk(g, pi, first, count, horizon, seed);
    }
  };
  if (threads == 1 || chunks == 1) {
    worker();
  } else {
    std::vector<std::future<void>> pool;
    int workers = static_cast<int>(std::min<long>(threads, chunks));
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.push_back(std::async(std::launch::async, worker));
    for (auto& f : pool) f.get();
  }

  int n = g.num_players;
  SimulationSummary out;
  out.trials = trials;
  out.horizon = horizon;
  out.seed = seed;
  out.mean_payoff.assign(n, 0.0);
  out.stderr_payoff.assign(n, 0.0);
  std::vector<double> sum(n, 0.0), sum_sq(n, 0.0);
  long terminated = 0;
  for (const ChunkStats& cs : stats) {
    for (int i = 0; i < n; ++i) {
      sum[i] += cs.sum[i];
      sum_sq[i] += cs.sum_sq[i];
    }
    terminated += cs.terminated;
    for (auto [stage, count] : cs.histogram) out.quit_stage_histogram[stage] += count;
  }
  double t = static_cast<double>(trials);
  for (int i = 0; i < n; ++i) {
    out.mean_payoff[i] = sum[i] / t;
    if (trials > 1) {
      double var = (sum_sq[i] - sum[i] * sum[i] / t) / (t - 1.0);
      out.stderr_payoff[i] = std::sqrt(std::max(0.0, var) / t);
    }
  }
  out.termination_rate = static_cast<double>(terminated) / t;
  return out;
}

}  // namespace qg
