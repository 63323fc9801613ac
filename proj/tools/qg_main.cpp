#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qg/montecarlo.hpp"
#include "qg/one_step.hpp"
#include "qg/perturbation.hpp"
#include "qg/repeated.hpp"
#include "qg/serialize.hpp"
#include "qg/solver.hpp"

namespace {

using qg::ojson;

// Report numbers carry 12 significant digits with trailing zeros trimmed,
// so replayed commands are byte-stable.
std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  if (std::isnan(x)) return "\"nan\"";
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void escape_string(const std::string& s, std::string& out) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void dump_json(const ojson& j, std::string& out, int indent) {
  std::string pad(2 * indent, ' ');
  std::string pad_in(2 * (indent + 1), ' ');
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        escape_string(key, out);
        out += ": ";
        dump_json(value, out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool scalars = true;
      for (const auto& e : j) scalars = scalars && !e.is_structured();
      if (scalars) {
        out += "[";
        bool first = true;
        for (const auto& e : j) {
          if (!first) out += ", ";
          first = false;
          dump_json(e, out, indent);
        }
        out += "]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        dump_json(e, out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case ojson::value_t::string:
      escape_string(j.get_ref<const std::string&>(), out);
      return;
    case ojson::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case ojson::value_t::number_integer:
    case ojson::value_t::number_unsigned:
      out += j.dump();
      return;
    case ojson::value_t::number_float:
      out += format_number(j.get<double>());
      return;
    default:
      out += "null";
      return;
  }
}

void dump_human(const ojson& j, const std::string& label, int indent, std::string& out) {
  std::string pad(2 * indent, ' ');
  if (j.is_object()) {
    if (!label.empty()) out += pad + label + ":\n";
    for (const auto& [key, value] : j.items())
      dump_human(value, key, label.empty() ? indent : indent + 1, out);
    return;
  }
  if (j.is_array() && !j.empty() && j[0].is_structured()) {
    out += pad + label + ":\n";
    for (std::size_t i = 0; i < j.size(); ++i)
      dump_human(j[i], "[" + std::to_string(i) + "]", indent + 1, out);
    return;
  }
  std::string value;
  dump_json(j, value, 0);
  out += pad + label + " = " + value + "\n";
}

std::uint64_t fnv1a(std::uint64_t h, const std::string& s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

struct Inputs {
  std::vector<std::pair<std::string, std::string>> parts;

  void add(const std::string& key, const std::string& value) { parts.emplace_back(key, value); }

  std::string digest() const {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (const auto& [k, v] : parts) {
      h = fnv1a(h, k);
      h = fnv1a(h, "=");
      h = fnv1a(h, v);
      h = fnv1a(h, ";");
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) qg::fail("FileNotFound", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ojson to_json(const std::vector<double>& v) {
  ojson a = ojson::array();
  for (double x : v) a.push_back(x);
  return a;
}

ojson to_json(const qg::MixedProfile& p) { return to_json(p.probs); }

const char* support_name(qg::SupportClass s) {
  switch (s) {
    case qg::SupportClass::AtZero: return "at_zero";
    case qg::SupportClass::AtOne: return "at_one";
    default: return "interior";
  }
}

struct Context {
  bool json_out = false;
  int threads = 1;

  std::string game_path;
  std::string profile_path;
  std::string input_path;
  std::string v_csv;
  std::string p_csv;
  std::string eps_str;
  std::string lambda_str;
  std::string eta_str;
  int player = 0;
  long truncate = -1;
  long trials = 100000;
  long horizon = 10000;
  std::uint64_t seed = 1;

  Inputs inputs;
  std::string command_echo;

  qg::QuittingGame game() {
    std::string text = read_file(game_path);
    inputs.add("game", text);
    return qg::validate_game(qg::json::parse(text, nullptr, true));
  }

  qg::EventuallyCyclicProfile profile(int num_players) {
    std::string text = read_file(profile_path);
    inputs.add("profile", text);
    return qg::validate_profile(qg::json::parse(text, nullptr, true), num_players);
  }

  // One-step inputs come either from --v/--p or from an --input file; mixing
  // the two is rejected rather than silently preferring one.
  void one_step_vectors(int num_players, bool need_v, bool need_p, std::vector<double>& v,
                        qg::MixedProfile& p) {
    if (!input_path.empty()) {
      if (!v_csv.empty() || !p_csv.empty())
        throw CLI::ValidationError("--input conflicts with --v/--p");
      std::string text = read_file(input_path);
      inputs.add("input", text);
      qg::json doc = qg::json::parse(text, nullptr, true);
      if (need_v) {
        if (!doc.contains("v")) qg::fail("BadVectorLength", "input file lacks \"v\"");
        v = qg::parse_vector(doc["v"], "v");
      }
      if (need_p) {
        if (!doc.contains("p")) qg::fail("BadVectorLength", "input file lacks \"p\"");
        p.probs = qg::parse_vector(doc["p"], "p");
      }
    } else {
      if (need_v) {
        if (v_csv.empty()) throw CLI::RequiredError("--v");
        inputs.add("v", v_csv);
        v = qg::parse_vector_csv(v_csv, "v");
      }
      if (need_p) {
        if (p_csv.empty()) throw CLI::RequiredError("--p");
        inputs.add("p", p_csv);
        p.probs = qg::parse_vector_csv(p_csv, "p");
      }
    }
    if (need_v && v.size() != static_cast<std::size_t>(num_players))
      qg::fail("BadVectorLength", "v has " + std::to_string(v.size()) + " entries, expected " +
                                      std::to_string(num_players));
    if (need_p) qg::check_profile_stage(p, num_players);
    for (double x : v)
      if (!std::isfinite(x)) qg::fail("NonFiniteEntry", "v entries must be finite");
  }

  int player_index(int num_players) {
    if (player < 1 || player > num_players)
      qg::fail("BadPlayerIndex", "--player must lie in 1.." + std::to_string(num_players));
    return player - 1;
  }

  void emit(const std::string& name, ojson result, std::vector<std::string> warnings = {}) {
    ojson envelope;
    envelope["command"] = command_echo.empty() ? name : command_echo;
    envelope["inputs_digest"] = inputs.digest();
    envelope["result"] = std::move(result);
    envelope["warnings"] = warnings;
    std::string out;
    if (json_out) {
      dump_json(envelope, out, 0);
      out += "\n";
    } else {
      dump_human(envelope, "", 0, out);
    }
    std::fputs(out.c_str(), stdout);
  }
};

ojson perfectness_json(const qg::PerfectnessReport& rep) {
  ojson r;
  r["epsilon_star"] = rep.epsilon_star;
  r["diff"] = to_json(rep.diff);
  ojson sup = ojson::array();
  for (auto s : rep.support) sup.push_back(support_name(s));
  r["support"] = std::move(sup);
  r["violation"] = to_json(rep.violation);
  return r;
}

ojson certificate_json(const qg::EquilibriumCertificate& cert) {
  ojson r;
  r["epsilon_star"] = cert.epsilon_star;
  r["current"] = to_json(cert.current);
  r["best_deviation"] = to_json(cert.best_deviation);
  r["gap"] = to_json(cert.gap);
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"toolkit for N-player quitting games"};
  app.require_subcommand(1);
  app.fallthrough();

  Context ctx;
  if (const char* env = std::getenv("QG_THREADS")) {
    int t = std::atoi(env);
    if (t >= 1) ctx.threads = t;
  }
  app.add_flag("--json", ctx.json_out, "emit the report as JSON");

  auto add_game = [&](CLI::App* sub) {
    sub->add_option("--game", ctx.game_path, "game file (JSON)")->required();
  };
  auto add_vp = [&](CLI::App* sub, bool with_v = true) {
    if (with_v) sub->add_option("--v", ctx.v_csv, "continuation payoffs, comma separated");
    sub->add_option("--p", ctx.p_csv, "quit probabilities, comma separated");
    sub->add_option("--input", ctx.input_path, "JSON file holding \"v\" and \"p\"");
  };
  auto add_profile = [&](CLI::App* sub) {
    sub->add_option("--profile", ctx.profile_path, "profile file (JSON)")->required();
  };

  std::vector<std::function<void()>> actions;
  auto on = [&](CLI::App* sub, std::function<void()> fn) {
    sub->callback([&actions, fn] { actions.push_back(fn); });
  };

  CLI::App* eval_onestep = app.add_subcommand("eval-onestep", "one-step expected payoff");
  add_game(eval_onestep);
  add_vp(eval_onestep);
  on(eval_onestep, [&] {
    qg::OneStepGame g{ctx.game(), {}};
    qg::MixedProfile p;
    ctx.one_step_vectors(g.num_players(), true, true, g.v, p);
    ojson r;
    r["payoff"] = to_json(qg::one_step_payoff(g, p));
    ctx.emit("eval-onestep", std::move(r));
  });

  CLI::App* check_perfect = app.add_subcommand("check-perfect", "stationarity report");
  add_game(check_perfect);
  add_vp(check_perfect);
  on(check_perfect, [&] {
    qg::OneStepGame g{ctx.game(), {}};
    qg::MixedProfile p;
    ctx.one_step_vectors(g.num_players(), true, true, g.v, p);
    qg::PerfectnessReport rep = qg::perfectness_report(g, p);
    ctx.emit("check-perfect", perfectness_json(rep), rep.warnings);
  });

  CLI::App* check_eq = app.add_subcommand("check-eq", "one-step deviation certificate");
  add_game(check_eq);
  add_vp(check_eq);
  on(check_eq, [&] {
    qg::OneStepGame g{ctx.game(), {}};
    qg::MixedProfile p;
    ctx.one_step_vectors(g.num_players(), true, true, g.v, p);
    ctx.emit("check-eq", certificate_json(qg::equilibrium_certificate(g, p)));
  });

  CLI::App* convert = app.add_subcommand("convert", "relate the two epsilon certificates");
  add_game(convert);
  add_vp(convert);
  on(convert, [&] {
    qg::OneStepGame g{ctx.game(), {}};
    qg::MixedProfile p;
    ctx.one_step_vectors(g.num_players(), true, true, g.v, p);
    qg::ConversionReport rep = qg::convert_certificates(g, p);
    ojson r;
    r["equilibrium_eps"] = rep.equilibrium_eps;
    r["perfectness_eps"] = rep.perfectness_eps;
    r["xi_p"] = rep.xi_p;
    r["forward_holds"] = rep.forward_holds;
    r["backward_holds"] = rep.backward_holds;
    ojson players = ojson::array();
    for (std::size_t i = 0; i < rep.players.size(); ++i) {
      const auto& pc = rep.players[i];
      ojson e;
      e["player"] = i + 1;
      e["support"] = support_name(pc.support);
      e["xi"] = pc.xi;
      e["diff"] = pc.diff;
      e["diff_lo"] = pc.diff_lo;
      e["diff_hi"] = pc.diff_hi;
      e["within"] = pc.within;
      players.push_back(std::move(e));
    }
    r["players"] = std::move(players);
    ctx.emit("convert", std::move(r));
  });

  CLI::App* perturb = app.add_subcommand("perturb", "push one player toward quitting");
  add_game(perturb);
  add_vp(perturb);
  perturb->add_option("--player", ctx.player, "player to perturb (1-indexed)")->required();
  perturb->add_option("--lambda", ctx.lambda_str, "perturbation weight in [0,1]")->required();
  perturb->add_option("--eta", ctx.eta_str, "claimed stationarity of p")->required();
  on(perturb, [&] {
    qg::OneStepGame g{ctx.game(), {}};
    qg::MixedProfile p;
    ctx.one_step_vectors(g.num_players(), true, true, g.v, p);
    ctx.inputs.add("player", std::to_string(ctx.player));
    ctx.inputs.add("lambda", ctx.lambda_str);
    ctx.inputs.add("eta", ctx.eta_str);
    int m = ctx.player_index(g.num_players());
    double lambda = qg::parse_number(std::string_view(ctx.lambda_str), "lambda");
    double eta = qg::parse_number(std::string_view(ctx.eta_str), "eta");
    qg::PerturbationReport rep = qg::theorem1_report(g, p, m, lambda, eta);
    ojson r;
    r["p_hat"] = to_json(rep.p_hat);
    r["gamma"] = to_json(rep.gamma_p);
    r["gamma_hat"] = to_json(rep.gamma_hat);
    r["continue_prob"] = rep.continue_prob;
    r["continue_prob_hat"] = rep.continue_prob_hat;
    r["continue_prob_ratio"] = rep.continue_prob_ratio;
    r["item1_residual"] = rep.item1_residual;
    r["item1_ok"] = rep.item1_ok;
    r["payoff_mix_residual"] = rep.payoff_mix_residual;
    r["item2_ok"] = rep.item2_ok;
    r["payoff_shift"] = rep.payoff_shift;
    r["shift_bound"] = rep.shift_bound;
    r["item3_ok"] = rep.item3_ok;
    r["eta"] = rep.eta;
    r["eta_tilde"] = rep.eta_tilde;
    r["perfectness_eps_hat"] = rep.perfectness_eps_hat;
    r["m_diff_hat"] = rep.m_diff_hat;
    r["item4_partial"] = rep.item4_partial;
    r["item4_ok"] = rep.item4_ok;
    ctx.emit("perturb", std::move(r));
  });

  CLI::App* eval = app.add_subcommand("eval", "expected payoff of a repeated profile");
  add_game(eval);
  add_profile(eval);
  eval->add_option("--truncate", ctx.truncate, "sum only the first K stages");
  on(eval, [&] {
    qg::QuittingGame g = ctx.game();
    qg::EventuallyCyclicProfile pi = ctx.profile(g.num_players);
    ojson r;
    if (ctx.truncate >= 0) {
      ctx.inputs.add("truncate", std::to_string(ctx.truncate));
      qg::TruncatedPayoff tp = qg::truncated_payoff(g, pi, ctx.truncate);
      r["payoff"] = to_json(tp.payoff);
      r["tail_bound"] = tp.tail_bound;
      r["horizon"] = ctx.truncate;
    } else {
      qg::RepeatedPayoffResult res = qg::repeated_payoff(g, pi);
      r["payoff"] = to_json(res.payoff);
      r["termination_prob"] = res.termination_prob;
      r["per_cycle_continue"] = res.per_cycle_continue;
    }
    ctx.emit("eval", std::move(r));
  });

  CLI::App* best_response = app.add_subcommand("best-response", "best reply of one player");
  add_game(best_response);
  add_profile(best_response);
  best_response->add_option("--player", ctx.player, "deviating player (1-indexed)")->required();
  on(best_response, [&] {
    qg::QuittingGame g = ctx.game();
    qg::EventuallyCyclicProfile pi = ctx.profile(g.num_players);
    ctx.inputs.add("player", std::to_string(ctx.player));
    qg::DeviationResult res = qg::best_response(g, pi, ctx.player_index(g.num_players));
    ojson r;
    r["player"] = res.player + 1;
    r["best_value"] = res.best_value;
    ojson policy = ojson::array();
    for (int a : res.best_policy) policy.push_back(a);
    r["best_policy"] = std::move(policy);
    ctx.emit("best-response", std::move(r));
  });

  CLI::App* check_eq_quitting =
      app.add_subcommand("check-eq-quitting", "equilibrium certificate for a repeated profile");
  add_game(check_eq_quitting);
  add_profile(check_eq_quitting);
  on(check_eq_quitting, [&] {
    qg::QuittingGame g = ctx.game();
    qg::EventuallyCyclicProfile pi = ctx.profile(g.num_players);
    qg::RepeatedCertificate cert = qg::equilibrium_certificate_repeated(g, pi);
    ojson r;
    r["epsilon_star"] = cert.epsilon_star;
    r["payoff"] = to_json(cert.payoff);
    r["best_value"] = to_json(cert.best_value);
    r["gap"] = to_json(cert.gap);
    ctx.emit("check-eq-quitting", std::move(r));
  });

  CLI::App* check_subgame =
      app.add_subcommand("check-subgame", "worst equilibrium gap over all stage shifts");
  add_game(check_subgame);
  add_profile(check_subgame);
  on(check_subgame, [&] {
    qg::QuittingGame g = ctx.game();
    qg::EventuallyCyclicProfile pi = ctx.profile(g.num_players);
    qg::SubgameCertificate cert = qg::subgame_certificate(g, pi);
    ojson r;
    r["epsilon_star"] = cert.epsilon_star;
    r["shift_epsilon"] = to_json(cert.shift_epsilon);
    ctx.emit("check-subgame", std::move(r));
  });

  CLI::App* solve = app.add_subcommand("solve-onestep", "enumerate one-step equilibria");
  add_game(solve);
  add_vp(solve);
  solve->add_option("--eps", ctx.eps_str, "certificate tolerance")->required();
  on(solve, [&] {
    qg::OneStepGame g{ctx.game(), {}};
    qg::MixedProfile unused;
    ctx.one_step_vectors(g.num_players(), true, false, g.v, unused);
    ctx.inputs.add("eps", ctx.eps_str);
    double eps = qg::parse_number(std::string_view(ctx.eps_str), "eps");
    std::vector<qg::MixedProfile> found = qg::find_one_step_equilibrium(g, eps);
    if (found.empty())
      qg::fail("NoneFound", "no equilibrium certified at eps = " + ctx.eps_str);
    ojson r;
    r["eps"] = eps;
    r["count"] = found.size();
    ojson eq = ojson::array();
    for (const auto& p : found) eq.push_back(to_json(p));
    r["equilibria"] = std::move(eq);
    ctx.emit("solve-onestep", std::move(r));
  });

  CLI::App* psi = app.add_subcommand("psi", "membership certificate for the payoff region");
  add_game(psi);
  add_vp(psi);
  psi->add_option("--eps", ctx.eps_str, "region parameter in (0,1)")->required();
  on(psi, [&] {
    qg::OneStepGame g{ctx.game(), {}};
    qg::MixedProfile unused;
    ctx.one_step_vectors(g.num_players(), true, false, g.v, unused);
    ctx.inputs.add("eps", ctx.eps_str);
    double eps = qg::parse_number(std::string_view(ctx.eps_str), "eps");
    qg::PsiMembershipCertificate cert = qg::construct_psi_member(g, eps);
    ojson r;
    r["eps"] = cert.eps;
    r["v"] = to_json(cert.v);
    r["p_source"] = to_json(cert.p_source);
    r["m"] = cert.m + 1;
    r["p_hat"] = to_json(cert.p_hat);
    r["gamma_hat"] = to_json(cert.gamma_hat);
    ojson checks;
    checks["in_v"] = cert.checks.in_v;
    if (cert.checks.in_v_witness >= 0)
      checks["in_v_witness"] = cert.checks.in_v_witness + 1;
    else
      checks["in_v_witness"] = nullptr;
    checks["perfect_ok"] = cert.checks.perfect_ok;
    checks["perfectness_eps"] = cert.checks.perfectness_eps;
    checks["perfectness_bound"] = cert.checks.perfectness_bound;
    checks["continue_ok"] = cert.checks.continue_ok;
    checks["continue_prob"] = cert.checks.continue_prob;
    checks["continue_bound"] = cert.checks.continue_bound;
    r["checks"] = std::move(checks);
    r["valid"] = cert.valid;
    ctx.emit("psi", std::move(r));
  });

  CLI::App* simulate = app.add_subcommand("simulate", "Monte-Carlo play of a repeated profile");
  add_game(simulate);
  add_profile(simulate);
  simulate->add_option("--trials", ctx.trials, "number of trials");
  simulate->add_option("--horizon", ctx.horizon, "stage cap per trial");
  simulate->add_option("--seed", ctx.seed, "RNG seed");
  on(simulate, [&] {
    qg::QuittingGame g = ctx.game();
    qg::EventuallyCyclicProfile pi = ctx.profile(g.num_players);
    ctx.inputs.add("trials", std::to_string(ctx.trials));
    ctx.inputs.add("horizon", std::to_string(ctx.horizon));
    ctx.inputs.add("seed", std::to_string(ctx.seed));
    qg::SimulationSummary sum = qg::simulate(g, pi, ctx.trials, ctx.horizon, ctx.seed, ctx.threads);
    ojson r;
    r["trials"] = sum.trials;
    r["horizon"] = sum.horizon;
    r["seed"] = sum.seed;
    r["mean_payoff"] = to_json(sum.mean_payoff);
    r["stderr_payoff"] = to_json(sum.stderr_payoff);
    r["termination_rate"] = sum.termination_rate;
    ojson hist;
    for (auto [stage, count] : sum.quit_stage_histogram) hist[std::to_string(stage)] = count;
    r["quit_stage_histogram"] = std::move(hist);
    ctx.emit("simulate", std::move(r));
  });

  std::string echo;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) echo += ' ';
    echo += argv[i];
  }
  ctx.command_echo = echo;

  try {
    app.parse(argc, argv);
    for (auto& fn : actions) fn();
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const qg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
