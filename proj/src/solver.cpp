#include "qg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qg {

namespace {

constexpr double kSlack = 1e-9;

// diff_n = gamma_v^n((p^-n,1)) - gamma_v^n((p^-n,0)), independent of p^n.
// Computed from the opponents' coalition masses:
//   diff_n = Q_n - A_n - B_n v^n
// with Q_n the expected quit payoff, A_n the absorption-by-others payoff and
// B_n the probability everyone else continues.
std::vector<double> all_diffs(const OneStepGame& g, const MixedProfile& p) {
  int n = g.num_players();
  std::vector<double> diffs(n, 0.0);
  std::vector<double> mass;
  std::vector<std::size_t> masks;
  for (int target = 0; target < n; ++target) {
    mass.assign(std::size_t{1} << n, 0.0);
    mass[0] = 1.0;
    masks.assign(1, 0);
    for (int i = 0; i < n; ++i) {
      if (i == target) continue;
      std::size_t block = std::size_t{1} << i;
      std::size_t count = masks.size();
      for (std::size_t k = 0; k < count; ++k) {
        std::size_t m = masks[k];
        mass[m | block] = mass[m] * p.probs[i];
        mass[m] = mass[m] * (1.0 - p.probs[i]);
        masks.push_back(m | block);
      }
    }
    std::sort(masks.begin(), masks.end());
    double q = 0.0, a = 0.0, b = 0.0;
    std::size_t bit = std::size_t{1} << target;
    for (std::size_t m : masks) {
      q += mass[m] * g.game.payoffs[m | bit][target];
      if (m == 0)
        b = mass[0];
      else
        a += mass[m] * g.game.payoffs[m][target];
    }
    diffs[target] = q - a - b * g.v[target];
  }
  return diffs;
}

double diff_one(const OneStepGame& g, const MixedProfile& p, int n) {
  return all_diffs(g, p)[n];
}

void snap_boundaries(MixedProfile& p) {
  for (double& x : p.probs) {
    if (x < 0.0) x = 0.0;
    if (x > 1.0) x = 1.0;
    if (x != 0.0 && std::abs(x) <= 1e-9) x = 0.0;
    if (x != 1.0 && std::abs(x - 1.0) <= 1e-9) x = 1.0;
  }
}

// Root structure of the linear function a*x + b on [0,1].
struct LinearRoot {
  enum Kind { None, Point, Everywhere } kind = None;
  double x = 0.0;
};

LinearRoot solve_linear(double a, double b) {
  if (std::abs(a) <= 1e-13) {
    if (std::abs(b) <= 1e-12) return {LinearRoot::Everywhere, 0.0};
    return {LinearRoot::None, 0.0};
  }
  return {LinearRoot::Point, -b / a};
}

bool interior(double x) { return x > 0.0 && x < 1.0; }

// Linear coefficients of x -> diff_n(p with p[var] = x): returns {slope, intercept}.
std::pair<double, double> diff_line(const OneStepGame& g, MixedProfile p, int n, int var) {
  p.probs[var] = 0.0;
  double at0 = diff_one(g, p, n);
  p.probs[var] = 1.0;
  double at1 = diff_one(g, p, n);
  return {at1 - at0, at0};
}

// Midpoint of the part of [0,1] where sign * (a*x + b) >= 0; negative if empty.
double feasible_midpoint(double a, double b, double sign) {
  a *= sign;
  b *= sign;
  double lo = 0.0, hi = 1.0;
  if (std::abs(a) <= 1e-13) {
    if (b < -1e-12) return -1.0;
  } else {
    double root = -b / a;
    if (a > 0.0)
      lo = std::max(lo, root);
    else
      hi = std::min(hi, root);
    if (lo > hi) return -1.0;
  }
  return 0.5 * (lo + hi);
}

// Newton iteration on the indifference system of the interior players,
// using the exact multilinear derivative d diff_n / d p_i =
// diff_n(p_i=1) - diff_n(p_i=0).  Returns false when the step degenerates.
bool newton_polish(const OneStepGame& g, MixedProfile& p) {
  std::vector<int> inter;
  for (int i = 0; i < p.num_players(); ++i) {
    if (p.probs[i] < 1e-7)
      p.probs[i] = 0.0;
    else if (p.probs[i] > 1.0 - 1e-7)
      p.probs[i] = 1.0;
    else
      inter.push_back(i);
  }
  if (inter.empty()) return true;
  int k = static_cast<int>(inter.size());
  for (int it = 0; it < 50; ++it) {
    std::vector<double> diffs = all_diffs(g, p);
    double worst = 0.0;
    for (int i : inter) worst = std::max(worst, std::abs(diffs[i]));
    if (worst <= 1e-14) return true;

    std::vector<std::vector<double>> jac(k, std::vector<double>(k, 0.0));
    std::vector<double> rhs(k);
    for (int a = 0; a < k; ++a) {
      rhs[a] = -diffs[inter[a]];
      for (int b = 0; b < k; ++b) {
        auto [slope, intercept] = diff_line(g, p, inter[a], inter[b]);
        (void)intercept;
        jac[a][b] = slope;
      }
    }
    // Gaussian elimination with partial pivoting.
    std::vector<int> perm(k);
    for (int i = 0; i < k; ++i) perm[i] = i;
    for (int col = 0; col < k; ++col) {
      int piv = col;
      for (int r = col + 1; r < k; ++r)
        if (std::abs(jac[r][col]) > std::abs(jac[piv][col])) piv = r;
      if (std::abs(jac[piv][col]) < 1e-13) return false;
      std::swap(jac[piv], jac[col]);
      std::swap(rhs[piv], rhs[col]);
      for (int r = col + 1; r < k; ++r) {
        double f = jac[r][col] / jac[col][col];
        for (int c = col; c < k; ++c) jac[r][c] -= f * jac[col][c];
        rhs[r] -= f * rhs[col];
      }
    }
    std::vector<double> delta(k);
    for (int r = k; r-- > 0;) {
      double s = rhs[r];
      for (int c = r + 1; c < k; ++c) s -= jac[r][c] * delta[c];
      delta[r] = s / jac[r][r];
    }
    for (int a = 0; a < k; ++a) {
      double next = p.probs[inter[a]] + delta[a];
      if (next < -0.25 || next > 1.25) return false;
      p.probs[inter[a]] = std::clamp(next, 0.0, 1.0);
    }
  }
  return true;
}

void add_candidate(const OneStepGame& g, double eps, MixedProfile p,
                   std::vector<MixedProfile>& out) {
  snap_boundaries(p);
  if (equilibrium_certificate(g, p).epsilon_star <= eps) out.push_back(std::move(p));
}

std::vector<MixedProfile> pure_equilibria(const OneStepGame& g, double eps) {
  int n = g.num_players();
  std::vector<MixedProfile> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    MixedProfile p{std::vector<double>(n, 0.0)};
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1u) p.probs[i] = 1.0;
    if (equilibrium_certificate(g, p).epsilon_star <= eps) out.push_back(std::move(p));
  }
  return out;
}

// Mixed supports for two active players i and j (any other players pinned
// inside `base`): each one's indifference line depends on the other alone.
void two_player_supports(const OneStepGame& g, double eps, const MixedProfile& base, int i,
                         int j, std::vector<MixedProfile>& out) {
  auto [ai, bi] = diff_line(g, base, i, j);  // diff_i as a function of p_j
  auto [aj, bj] = diff_line(g, base, j, i);  // diff_j as a function of p_i
  LinearRoot ri = solve_linear(ai, bi);      // p_j values making i indifferent
  LinearRoot rj = solve_linear(aj, bj);      // p_i values making j indifferent

  MixedProfile p = base;
  if (ri.kind == LinearRoot::Point && rj.kind == LinearRoot::Point) {
    if (interior(ri.x) && interior(rj.x)) {
      p.probs[i] = rj.x;
      p.probs[j] = ri.x;
      add_candidate(g, eps, p, out);
    }
  } else if (ri.kind == LinearRoot::Everywhere && rj.kind == LinearRoot::Point) {
    if (interior(rj.x)) {
      p.probs[i] = rj.x;
      p.probs[j] = 0.5;
      add_candidate(g, eps, p, out);
    }
  } else if (ri.kind == LinearRoot::Point && rj.kind == LinearRoot::Everywhere) {
    if (interior(ri.x)) {
      p.probs[i] = 0.5;
      p.probs[j] = ri.x;
      add_candidate(g, eps, p, out);
    }
  } else if (ri.kind == LinearRoot::Everywhere && rj.kind == LinearRoot::Everywhere) {
    p.probs[i] = 0.5;
    p.probs[j] = 0.5;
    add_candidate(g, eps, p, out);
  }

  // One of the two at a pure action, the other indifferent: the boundary
  // value must itself sit on the partner's indifference line, leaving a
  // one-dimensional family; report the midpoint of its feasible part.
  for (int round = 0; round < 2; ++round) {
    int fixed = round == 0 ? i : j;
    int free = round == 0 ? j : i;
    auto [af, bf] = round == 0 ? std::pair{ai, bi} : std::pair{aj, bj};
    auto [ax, bx] = round == 0 ? std::pair{aj, bj} : std::pair{ai, bi};
    // diff_free as a function of p_fixed is (ax, bx); diff_fixed as a
    // function of p_free is (af, bf).
    for (double b : {0.0, 1.0}) {
      if (std::abs(ax * b + bx) > 1e-12) continue;  // free player not indifferent
      double mid = feasible_midpoint(af, bf, b == 0.0 ? -1.0 : 1.0);
      if (mid <= 0.0 || mid >= 1.0) continue;
      MixedProfile q = base;
      q.probs[fixed] = b;
      q.probs[free] = mid;
      add_candidate(g, eps, q, out);
    }
  }
}

void mixed_two_player(const OneStepGame& g, double eps, std::vector<MixedProfile>& out) {
  MixedProfile base{std::vector<double>(2, 0.0)};
  two_player_supports(g, eps, base, 0, 1, out);
}

void mixed_three_player(const OneStepGame& g, double eps, std::vector<MixedProfile>& out) {
  // Two interior players, third pinned at a pure action.
  for (int k = 0; k < 3; ++k) {
    int i = (k + 1) % 3, j = (k + 2) % 3;
    for (double b : {0.0, 1.0}) {
      MixedProfile base{std::vector<double>(3, 0.0)};
      base.probs[k] = b;
      two_player_supports(g, eps, base, std::min(i, j), std::max(i, j), out);
    }
  }
  // One interior player: its indifference value is a constant once the other
  // two are pinned, so only a degenerate game admits this support.
  for (int i = 0; i < 3; ++i) {
    for (int mask = 0; mask < 4; ++mask) {
      MixedProfile p{std::vector<double>(3, 0.0)};
      int others[2] = {(i + 1) % 3, (i + 2) % 3};
      p.probs[others[0]] = mask & 1 ? 1.0 : 0.0;
      p.probs[others[1]] = mask & 2 ? 1.0 : 0.0;
      p.probs[i] = 0.5;
      if (std::abs(diff_one(g, p, i)) <= 1e-12) add_candidate(g, eps, p, out);
    }
  }
  // Fully interior support: scan one coordinate, eliminating the other two
  // through their (linear) indifference conditions, and bisect the residual.
  for (int scan = 0; scan < 3; ++scan) {
    int u = (scan + 1) % 3, w = (scan + 2) % 3;
    // Given x = p_scan: diff_u is linear in p_w, diff_w is linear in p_u.
    auto point = [&](double x) -> std::pair<bool, MixedProfile> {
      MixedProfile p{std::vector<double>(3, 0.5)};
      p.probs[scan] = x;
      auto [aw, bw] = diff_line(g, p, u, w);  // diff_u over p_w
      LinearRoot rw = solve_linear(aw, bw);
      if (rw.kind != LinearRoot::Point || !interior(rw.x)) return {false, p};
      p.probs[w] = rw.x;
      auto [au, bu] = diff_line(g, p, w, u);  // diff_w over p_u
      LinearRoot ru = solve_linear(au, bu);
      if (ru.kind != LinearRoot::Point || !interior(ru.x)) return {false, p};
      p.probs[u] = ru.x;
      return {true, p};
    };
    auto residual = [&](double x) -> std::pair<bool, double> {
      auto [ok, p] = point(x);
      if (!ok) return {false, 0.0};
      return {true, diff_one(g, p, scan)};
    };
    const int steps = 400;
    double prev_x = -1.0, prev_r = 0.0;
    bool have_prev = false;
    for (int s = 0; s <= steps; ++s) {
      double x = static_cast<double>(s) / steps;
      auto [ok, r] = residual(x);
      if (!ok) {
        have_prev = false;
        continue;
      }
      if (std::abs(r) <= 1e-12 && interior(x)) {
        auto [pok, p] = point(x);
        if (pok) add_candidate(g, eps, p, out);
      } else if (have_prev && ((prev_r < 0.0) != (r < 0.0))) {
        double lo = prev_x, hi = x, rlo = prev_r;
        for (int it = 0; it < 80; ++it) {
          double mid = 0.5 * (lo + hi);
          auto [mok, mr] = residual(mid);
          if (!mok) break;
          if ((mr < 0.0) == (rlo < 0.0)) {
            lo = mid;
            rlo = mr;
          } else {
            hi = mid;
          }
        }
        double x0 = 0.5 * (lo + hi);
        if (interior(x0)) {
          auto [pok, p] = point(x0);
          if (pok) {
            newton_polish(g, p);
            add_candidate(g, eps, p, out);
          }
        }
      }
      prev_x = x;
      prev_r = r;
      have_prev = true;
    }
  }
}

MixedProfile damped_best_response(const OneStepGame& g, MixedProfile p) {
  double best_step = HUGE_VAL;
  int since_best = 0;
  for (int round = 0; round < 10000; ++round) {
    std::vector<double> diffs = all_diffs(g, p);
    double max_step = 0.0;
    for (int i = 0; i < p.num_players(); ++i) {
      double target = diffs[i] > 0.0 ? 1.0 : (diffs[i] < 0.0 ? 0.0 : p.probs[i]);
      double next = p.probs[i] + 0.5 * (target - p.probs[i]);
      max_step = std::max(max_step, std::abs(next - p.probs[i]));
      p.probs[i] = next;
    }
    if (max_step < 1e-13) break;
    // Orbiting iterates never push the step size to new lows; cut them off.
    if (max_step < best_step - 1e-15) {
      best_step = max_step;
      since_best = 0;
    } else if (++since_best > 200) {
      break;
    }
  }
  return p;
}

void mixed_grid(const OneStepGame& g, double eps, std::vector<MixedProfile>& out) {
  int n = g.num_players();
  double step = n <= 4 ? 0.05 : 0.25;
  int levels = static_cast<int>(std::lround(1.0 / step)) + 1;
  std::vector<int> idx(n, 0);
  std::vector<MixedProfile> refined;
  while (true) {
    MixedProfile seed{std::vector<double>(n, 0.0)};
    for (int i = 0; i < n; ++i) seed.probs[i] = std::min(1.0, idx[i] * step);
    MixedProfile r = damped_best_response(g, seed);
    bool fresh = true;
    for (const auto& q : refined) {
      double d = 0.0;
      for (int i = 0; i < n; ++i) d = std::max(d, std::abs(q.probs[i] - r.probs[i]));
      if (d <= 1e-4) {
        fresh = false;
        break;
      }
    }
    if (fresh) {
      refined.push_back(r);
      newton_polish(g, r);
      add_candidate(g, eps, r, out);
    }
    int carry = 0;
    while (carry < n && ++idx[carry] == levels) idx[carry++] = 0;
    if (carry == n) break;
  }
}

void sort_dedupe(std::vector<MixedProfile>& out) {
  std::sort(out.begin(), out.end(),
            [](const MixedProfile& a, const MixedProfile& b) { return a.probs < b.probs; });
  std::vector<MixedProfile> kept;
  for (auto& p : out) {
    bool dup = false;
    for (const auto& q : kept) {
      double d = 0.0;
      for (int i = 0; i < p.num_players(); ++i)
        d = std::max(d, std::abs(p.probs[i] - q.probs[i]));
      if (d <= 1e-6) {
        dup = true;
        break;
      }
    }
    if (!dup) kept.push_back(std::move(p));
  }
  out = std::move(kept);
}

// `thorough` additionally runs the grid sweep for N = 3, where the support
// enumeration already covers every pattern; N >= 4 always uses the grid.
std::vector<MixedProfile> mixed_equilibria(const OneStepGame& g, double eps, bool thorough) {
  std::vector<MixedProfile> out;
  int n = g.num_players();
  if (n == 1) {
    MixedProfile p{std::vector<double>(1, 0.5)};
    if (std::abs(diff_one(g, p, 0)) <= 1e-12) add_candidate(g, eps, p, out);
  } else if (n == 2) {
    mixed_two_player(g, eps, out);
  } else if (n == 3) {
    mixed_three_player(g, eps, out);
    if (thorough) mixed_grid(g, eps, out);
  } else {
    mixed_grid(g, eps, out);
  }
  return out;
}

bool select_ok(const OneStepGame& g, const MixedProfile& p) {
  try {
    select_player_m(g, p);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

std::vector<MixedProfile> find_one_step_equilibrium(const OneStepGame& g, double eps) {
  check_one_step(g);
  if (g.num_players() > 5)
    fail("TooManyPlayers", "exhaustive equilibrium search is capped at 5 players");
  std::vector<MixedProfile> out = pure_equilibria(g, eps);
  std::vector<MixedProfile> mixed = mixed_equilibria(g, eps, /*thorough=*/true);
  out.insert(out.end(), mixed.begin(), mixed.end());
  sort_dedupe(out);
  return out;
}

int select_player_m(const OneStepGame& g, const MixedProfile& p) {
  if (p.is_zero()) {
    for (int m = 0; m < g.num_players(); ++m)
      if (std::abs(g.v[m] - 1.0) <= kSlack) return m;
    fail("NoQualifyingPlayer", "p = 0 requires some v^m = 1");
  }
  std::vector<double> gamma = one_step_payoff(g, p);
  for (int m = 0; m < g.num_players(); ++m)
    if (p.probs[m] > 0.0 && gamma[m] <= 1.0 + kSlack) return m;
  fail("NoQualifyingPlayer", "no quitting player has payoff <= 1");
}

PsiMembershipCertificate construct_psi_member(const OneStepGame& g, double eps) {
  check_one_step(g);
  if (!(eps > 0.0 && eps < 1.0))
    fail("BadEpsilon", "eps must lie in (0,1), got " + std::to_string(eps));
  int n = g.num_players();
  for (int i = 0; i < n; ++i)
    if (g.game.payoff(Coalition::single(i), i) != 1.0)
      fail("AssumptionViolated", "own-quit payoff r^n_{n} must equal 1 for every player");
  double rmax = r_max(g.game);
  bool some_low = false;
  for (int i = 0; i < n; ++i) {
    if (std::abs(g.v[i]) > 2.0 * rmax + kSlack)
      fail("AssumptionViolated", "|v^n| must not exceed 2 r_max");
    some_low = some_low || g.v[i] <= 1.0 + kSlack;
  }
  if (!some_low) fail("AssumptionViolated", "some v^n must be <= 1");

  // Pure equilibria come first: they are exact and almost always enough.
  // Mixed supports are searched only when no pure profile qualifies.
  const double find_eps = 1e-9;
  std::vector<MixedProfile> candidates = pure_equilibria(g, find_eps);
  sort_dedupe(candidates);
  std::vector<MixedProfile> qualifying;
  for (const auto& p : candidates)
    if (select_ok(g, p)) qualifying.push_back(p);
  if (qualifying.empty()) {
    std::vector<MixedProfile> mixed = mixed_equilibria(g, find_eps, /*thorough=*/false);
    candidates.insert(candidates.end(), mixed.begin(), mixed.end());
    sort_dedupe(candidates);
    for (const auto& p : candidates)
      if (select_ok(g, p)) qualifying.push_back(p);
  }
  if (candidates.empty())
    fail("NoEquilibriumFound", "the one-step game yielded no certified equilibrium");
  if (qualifying.empty())
    fail("NoQualifyingPlayer", "no certified equilibrium admits a perturbation target");

  // Prefer p = 0; otherwise the profile whose quitting players sit deepest
  // below payoff 1 (maximum of min_n over quitters of 1 - gamma^n), with the
  // lexicographically smallest profile breaking ties.
  const MixedProfile* chosen = nullptr;
  double best_score = -HUGE_VAL;
  for (const auto& p : qualifying) {
    if (p.is_zero()) {
      chosen = &p;
      break;
    }
    std::vector<double> gamma = one_step_payoff(g, p);
    double score = HUGE_VAL;
    for (int i = 0; i < n; ++i)
      if (p.probs[i] > 0.0) score = std::min(score, 1.0 - gamma[i]);
    if (score > best_score) {
      best_score = score;
      chosen = &p;
    }
  }

  PsiMembershipCertificate cert;
  cert.eps = eps;
  cert.v = g.v;
  cert.p_source = *chosen;
  cert.m = select_player_m(g, cert.p_source);
  cert.p_hat = perturb(cert.p_source, cert.m, eps);
  cert.gamma_hat = one_step_payoff(g, cert.p_hat);

  cert.checks.perfectness_bound = 2.0 * eps * rmax;
  cert.checks.perfectness_eps = perfectness_report(g, cert.p_hat).epsilon_star;
  cert.checks.perfect_ok = cert.checks.perfectness_eps <= cert.checks.perfectness_bound + kSlack;

  cert.checks.continue_bound = 1.0 - eps;
  cert.checks.continue_prob = rho(cert.p_hat, Coalition{});
  cert.checks.continue_ok = cert.checks.continue_prob <= cert.checks.continue_bound + kSlack;

  bool in_box = true;
  for (double x : cert.gamma_hat) in_box = in_box && std::abs(x) <= 2.0 * rmax + kSlack;
  cert.checks.in_v_witness = -1;
  if (cert.gamma_hat[cert.m] <= 1.0 + kSlack) {
    cert.checks.in_v_witness = cert.m;
  } else {
    for (int i = 0; i < n; ++i)
      if (cert.gamma_hat[i] <= 1.0 + kSlack) {
        cert.checks.in_v_witness = i;
        break;
      }
  }
  cert.checks.in_v = in_box && cert.checks.in_v_witness >= 0;
  cert.valid = cert.checks.in_v && cert.checks.perfect_ok && cert.checks.continue_ok;
  return cert;
}

}  // namespace qg
