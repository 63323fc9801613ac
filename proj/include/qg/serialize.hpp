#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qg/game_model.hpp"

namespace qg {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;  // keeps field order for emitted documents

// Numeric fields accept JSON numbers as well as strings holding a decimal
// ("0.25") or a simple fraction ("10/9").
double parse_number(const json& j, const std::string& where);
double parse_number(std::string_view text, const std::string& where);

std::vector<double> parse_vector(const json& j, const std::string& where);

// Comma-separated list of decimals/fractions, e.g. "9/10,10/9".
std::vector<double> parse_vector_csv(std::string_view text, const std::string& where);

// Coalition keys are sorted, comma-separated, 1-indexed player lists: "1,3".
std::string coalition_key(Coalition s, int num_players);
Coalition parse_coalition_key(std::string_view key, int num_players);

// Game file: {"players": N, "payoffs": {"1": [...], "1,2": [...], ...}}
// with one entry per nonempty coalition.
QuittingGame validate_game(const json& raw);
ojson serialize_game(const QuittingGame& g);

// Profile file: {"prefix": [[...], ...], "cycle": [[...], ...]}.
EventuallyCyclicProfile validate_profile(const json& raw, int num_players);
ojson serialize_profile(const EventuallyCyclicProfile& pi);

json load_json_file(const std::string& path);

}  // namespace qg
