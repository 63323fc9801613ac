#include "qg/serialize.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace qg {

namespace {

double parse_decimal(std::string_view text, const std::string& where) {
  std::string s(text);
  if (s.empty()) fail("BadNumber", where + ": empty numeric string");
  errno = 0;
  char* end = nullptr;
  double x = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE)
    fail("BadNumber", where + ": cannot parse '" + s + "'");
  return x;
}

}  // namespace

double parse_number(std::string_view text, const std::string& where) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text, where);
  double num = parse_decimal(text.substr(0, slash), where);
  double den = parse_decimal(text.substr(slash + 1), where);
  if (den == 0.0) fail("BadNumber", where + ": zero denominator");
  return num / den;
}

double parse_number(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_number(std::string_view(j.get_ref<const std::string&>()), where);
  fail("BadNumber", where + ": expected a number or numeric string");
}

std::vector<double> parse_vector(const json& j, const std::string& where) {
  if (!j.is_array()) fail("BadVectorLength", where + ": expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(parse_number(e, where));
  return out;
}

std::vector<double> parse_vector_csv(std::string_view text, const std::string& where) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    auto comma = text.find(',', start);
    auto piece = text.substr(start, comma == std::string_view::npos ? comma : comma - start);
    out.push_back(parse_number(piece, where));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string coalition_key(Coalition s, int num_players) {
  std::string key;
  for (int n = 0; n < num_players; ++n) {
    if (!s.contains(n)) continue;
    if (!key.empty()) key += ',';
    key += std::to_string(n + 1);
  }
  return key;
}

Coalition parse_coalition_key(std::string_view key, int num_players) {
  Coalition s;
  int prev = 0;
  std::size_t start = 0;
  while (start <= key.size()) {
    auto comma = key.find(',', start);
    auto piece = key.substr(start, comma == std::string_view::npos ? comma : comma - start);
    int player = 0;
    for (char c : piece) {
      if (c < '0' || c > '9')
        fail("BadCoalitionKey", "coalition key '" + std::string(key) + "' is not a player list");
      player = player * 10 + (c - '0');
    }
    if (piece.empty() || player < 1 || player > num_players)
      fail("BadCoalitionKey", "coalition key '" + std::string(key) + "' names player out of range");
    if (player <= prev)
      fail("BadCoalitionKey",
           "coalition key '" + std::string(key) + "' must list players in increasing order");
    prev = player;
    s.mask |= 1u << (player - 1);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return s;
}

QuittingGame validate_game(const json& raw) {
  if (!raw.is_object()) fail("BadGameFile", "game document must be a JSON object");
  if (!raw.contains("players")) fail("BadGameFile", "missing \"players\"");
  if (!raw["players"].is_number_integer()) fail("BadGameFile", "\"players\" must be an integer");
  int n = raw["players"].get<int>();
  if (n < 1) fail("BadPlayerCount", "need at least one player, got " + std::to_string(n));
  if (n > 24) fail("TooManyPlayers", "coalition enumeration capped at 24 players");

  QuittingGame g;
  g.num_players = n;
  g.payoffs.assign(std::size_t{1} << n, std::vector<double>(n, 0.0));

  if (!raw.contains("payoffs") || !raw["payoffs"].is_object())
    fail("BadGameFile", "missing \"payoffs\" object");
  std::vector<bool> seen(std::size_t{1} << n, false);
  for (const auto& [key, value] : raw["payoffs"].items()) {
    Coalition s = parse_coalition_key(key, n);
    if (s.empty()) fail("BadCoalitionKey", "the empty coalition has no payoff entry");
    if (seen[s.mask]) fail("BadCoalitionKey", "duplicate coalition '" + key + "'");
    seen[s.mask] = true;
    auto r = parse_vector(value, "payoffs[" + key + "]");
    if (r.size() != static_cast<std::size_t>(n))
      fail("BadVectorLength", "payoffs[" + key + "] has length " + std::to_string(r.size()) +
                                  ", expected " + std::to_string(n));
    g.payoffs[s.mask] = std::move(r);
  }
  for (std::size_t mask = 1; mask < seen.size(); ++mask)
    if (!seen[mask])
      fail("MissingCoalition",
           "no payoff for coalition '" + coalition_key({static_cast<std::uint32_t>(mask)}, n) + "'");
  check_game(g);
  return g;
}

ojson serialize_game(const QuittingGame& g) {
  ojson payoffs = ojson::object();
  for (std::size_t mask = 1; mask < g.payoffs.size(); ++mask)
    payoffs[coalition_key({static_cast<std::uint32_t>(mask)}, g.num_players)] = g.payoffs[mask];
  ojson out;
  out["players"] = g.num_players;
  out["payoffs"] = std::move(payoffs);
  return out;
}

EventuallyCyclicProfile validate_profile(const json& raw, int num_players) {
  if (!raw.is_object()) fail("BadProfileFile", "profile document must be a JSON object");
  EventuallyCyclicProfile pi;
  auto read_stages = [&](const char* field, std::vector<MixedProfile>& out) {
    if (!raw.contains(field)) return;
    if (!raw[field].is_array()) fail("BadProfileFile", std::string("\"") + field + "\" must be an array");
    for (const auto& stage : raw[field])
      out.push_back(MixedProfile{parse_vector(stage, field)});
  };
  read_stages("prefix", pi.prefix);
  read_stages("cycle", pi.cycle);
  check_profile(pi, num_players);
  return pi;
}

ojson serialize_profile(const EventuallyCyclicProfile& pi) {
  ojson out;
  out["prefix"] = ojson::array();
  for (const auto& p : pi.prefix) out["prefix"].push_back(p.probs);
  out["cycle"] = ojson::array();
  for (const auto& p : pi.cycle) out["cycle"].push_back(p.probs);
  return out;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("FileNotFound", "cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail("BadJson", path + ": " + e.what());
  }
  return j;
}

}  // namespace qg
