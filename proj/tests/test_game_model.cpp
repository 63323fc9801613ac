#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "qg/serialize.hpp"

using namespace qg;
using namespace qgtest;

TEST_CASE("coalition basics") {
  Coalition s{0b101};
  CHECK(s.contains(0));
  CHECK(!s.contains(1));
  CHECK(s.contains(2));
  CHECK(s.size() == 2);
  CHECK(!s.empty());
  CHECK(Coalition::single(1).mask == 0b10u);
  CHECK(Coalition::all(3).mask == 0b111u);
  CHECK(Coalition{}.empty());
}

TEST_CASE("check_game accepts well-formed games") {
  CHECK_NOTHROW(check_game(penalty_game()));
  CHECK_NOTHROW(check_game(tilted_game()));
  CHECK_NOTHROW(check_game(tight_shift_game()));
}

TEST_CASE("check_game rejects malformed games") {
  QuittingGame g = penalty_game();

  g.num_players = 0;
  CHECK_THROWS_WITH_AS(check_game(g), doctest::Contains("BadPlayerCount"), Error);

  g = penalty_game();
  g.num_players = 25;
  CHECK_THROWS_WITH_AS(check_game(g), doctest::Contains("TooManyPlayers"), Error);

  g = penalty_game();
  g.payoffs.pop_back();
  CHECK_THROWS_WITH_AS(check_game(g), doctest::Contains("MissingCoalition"), Error);

  g = penalty_game();
  g.payoffs[2] = {1.0};
  CHECK_THROWS_WITH_AS(check_game(g), doctest::Contains("BadVectorLength"), Error);

  g = penalty_game();
  g.payoffs[1][0] = std::nan("");
  CHECK_THROWS_WITH_AS(check_game(g), doctest::Contains("NonFiniteEntry"), Error);

  g = penalty_game();
  g.payoffs[3][1] = HUGE_VAL;
  CHECK_THROWS_WITH_AS(check_game(g), doctest::Contains("NonFiniteEntry"), Error);

  g = penalty_game();
  g.payoffs[0] = {0.5, 0.0};
  CHECK_THROWS_WITH_AS(check_game(g), doctest::Contains("NonZeroEmptyCoalition"), Error);
}

TEST_CASE("r_max scans every nonempty coalition") {
  CHECK(r_max(penalty_game()) == 2.0);
  CHECK(r_max(tilted_game()) == 1.0);
  CHECK(r_max(tight_shift_game()) == 1.0);
  QuittingGame zero = game2({0, 0}, {0, 0}, {0, 0});
  CHECK(r_max(zero) == 0.0);
}

TEST_CASE("profile stage checks") {
  CHECK_THROWS_WITH_AS(check_profile_stage(MixedProfile{{0.5, 1.5}}, 2),
                       doctest::Contains("BadProbability"), Error);
  CHECK_THROWS_WITH_AS(check_profile_stage(MixedProfile{{-0.1, 0.5}}, 2),
                       doctest::Contains("BadProbability"), Error);
  CHECK_THROWS_WITH_AS(check_profile_stage(MixedProfile{{0.5}}, 2),
                       doctest::Contains("BadVectorLength"), Error);
  CHECK_NOTHROW(check_profile_stage(MixedProfile{{0.0, 1.0}}, 2));

  EventuallyCyclicProfile no_cycle;
  no_cycle.prefix.push_back(MixedProfile{{0.5, 0.5}});
  CHECK_THROWS_WITH_AS(check_profile(no_cycle, 2), doctest::Contains("EmptyCycle"), Error);
}

TEST_CASE("stage_profile walks prefix then cycle") {
  EventuallyCyclicProfile pi;
  pi.prefix = {MixedProfile{{0.1, 0.0}}};
  pi.cycle = {MixedProfile{{0.2, 0.0}}, MixedProfile{{0.3, 0.0}}};

  CHECK(stage_profile(pi, 1).probs[0] == 0.1);
  CHECK(stage_profile(pi, 2).probs[0] == 0.2);
  CHECK(stage_profile(pi, 3).probs[0] == 0.3);
  CHECK(stage_profile(pi, 4).probs[0] == 0.2);
  CHECK(stage_profile(pi, 5).probs[0] == 0.3);
  CHECK(stage_profile(pi, 1001).probs[0] == 0.3);
  CHECK(stage_profile(pi, 1002).probs[0] == 0.2);
  CHECK_THROWS_WITH_AS(stage_profile(pi, 0), doctest::Contains("BadStageIndex"), Error);
}

TEST_CASE("subgame_profile rotates the cycle once the prefix is consumed") {
  EventuallyCyclicProfile pi;
  pi.cycle = {MixedProfile{{0.2, 0.0}}, MixedProfile{{0.3, 0.0}}};

  EventuallyCyclicProfile shifted = subgame_profile(pi, 2);
  CHECK(shifted.prefix.empty());
  REQUIRE(shifted.cycle.size() == 2);
  CHECK(shifted.cycle[0].probs[0] == 0.3);
  CHECK(shifted.cycle[1].probs[0] == 0.2);
}

TEST_CASE("subgame_profile matches a plain stage shift") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(rng() % 4);
    EventuallyCyclicProfile pi = random_cyclic(rng, n, 3, 4);
    long horizon = 3 * pi.period();
    for (long j = 1; j <= horizon; ++j) {
      EventuallyCyclicProfile sub = subgame_profile(pi, j);
      for (long k = 1; k <= horizon; ++k) {
        REQUIRE(stage_profile(sub, k) == stage_profile(pi, j + k - 1));
      }
    }
  }
}

TEST_CASE("parse_number accepts numbers, decimal strings, and fractions") {
  CHECK(parse_number(json(0.25), "x") == 0.25);
  CHECK(parse_number(json("0.25"), "x") == 0.25);
  CHECK(parse_number(json("10/9"), "x") == 10.0 / 9.0);
  CHECK(parse_number(json("-3/4"), "x") == -0.75);
  CHECK(parse_number(json(7), "x") == 7.0);
  CHECK_THROWS_WITH_AS(parse_number(json("1/0"), "x"), doctest::Contains("BadNumber"), Error);
  CHECK_THROWS_WITH_AS(parse_number(json("abc"), "x"), doctest::Contains("BadNumber"), Error);
  CHECK_THROWS_WITH_AS(parse_number(json("1/2/3"), "x"), doctest::Contains("BadNumber"), Error);
  CHECK_THROWS_WITH_AS(parse_number(json(nullptr), "x"), doctest::Contains("BadNumber"), Error);
}

TEST_CASE("parse_vector_csv splits comma lists") {
  std::vector<double> v = parse_vector_csv("0.1,0,1/2", "p");
  REQUIRE(v.size() == 3);
  CHECK(v[0] == 0.1);
  CHECK(v[1] == 0.0);
  CHECK(v[2] == 0.5);
  CHECK_THROWS_AS(parse_vector_csv("0.1,,0.2", "p"), Error);
}

TEST_CASE("coalition keys are ascending 1-indexed player lists") {
  CHECK(coalition_key(Coalition{0b101}, 3) == "1,3");
  CHECK(coalition_key(Coalition{0b10}, 2) == "2");
  CHECK(parse_coalition_key("1,3", 3).mask == 0b101u);
  CHECK_THROWS_WITH_AS(parse_coalition_key("3,1", 3), doctest::Contains("BadCoalitionKey"), Error);
  CHECK_THROWS_WITH_AS(parse_coalition_key("1,1", 3), doctest::Contains("BadCoalitionKey"), Error);
  CHECK_THROWS_WITH_AS(parse_coalition_key("0", 3), doctest::Contains("BadCoalitionKey"), Error);
  CHECK_THROWS_WITH_AS(parse_coalition_key("4", 3), doctest::Contains("BadCoalitionKey"), Error);
  CHECK_THROWS_WITH_AS(parse_coalition_key("", 3), doctest::Contains("BadCoalitionKey"), Error);
  CHECK_THROWS_WITH_AS(parse_coalition_key("1,x", 3), doctest::Contains("BadCoalitionKey"), Error);
}

TEST_CASE("validate_game parses payoff tables keyed by coalition") {
  json raw = {
      {"players", 2},
      {"payoffs",
       {{"1", {1.0, -1.0}}, {"2", {1.0, 1.0}}, {"1,2", {-2.0, -2.0}}}},
  };
  QuittingGame g = validate_game(raw);
  CHECK(g == penalty_game());
}

TEST_CASE("validate_game accepts fraction entries") {
  json raw = {
      {"players", 2},
      {"payoffs", {{"1", {"1/2", -1.0}}, {"2", {1, 1}}, {"1,2", {"-2", "-2.0"}}}},
  };
  QuittingGame g = validate_game(raw);
  CHECK(g.payoff(Coalition{0b01}, 0) == 0.5);
  CHECK(g.payoff(Coalition{0b11}, 0) == -2.0);
}

TEST_CASE("validate_game rejects structural problems") {
  json raw = {{"players", 2}, {"payoffs", {{"1", {1, 1}}, {"2", {1, 1}}}}};
  CHECK_THROWS_WITH_AS(validate_game(raw), doctest::Contains("MissingCoalition"), Error);

  raw = {{"players", 2},
         {"payoffs", {{"1", {1, 1}}, {"2", {1, 1}}, {"1,2", {1, 1}}, {"1,3", {1, 1}}}}};
  CHECK_THROWS_WITH_AS(validate_game(raw), doctest::Contains("BadCoalitionKey"), Error);

  raw = {{"players", 0}, {"payoffs", json::object()}};
  CHECK_THROWS_WITH_AS(validate_game(raw), doctest::Contains("BadPlayerCount"), Error);

  raw = {{"payoffs", json::object()}};
  CHECK_THROWS_AS(validate_game(raw), Error);

  raw = {{"players", 2}, {"payoffs", {{"1", {1, 1, 1}}, {"2", {1, 1}}, {"1,2", {1, 1}}}}};
  CHECK_THROWS_WITH_AS(validate_game(raw), doctest::Contains("BadVectorLength"), Error);
}

TEST_CASE("game serialization round-trips exactly") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 1 + static_cast<int>(rng() % 5);
    QuittingGame g = random_game(rng, n);
    QuittingGame back = validate_game(json::parse(serialize_game(g).dump()));
    REQUIRE(back == g);
  }
}

TEST_CASE("profile serialization round-trips exactly") {
  std::mt19937_64 rng(78);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 1 + static_cast<int>(rng() % 5);
    EventuallyCyclicProfile pi = random_cyclic(rng, n);
    EventuallyCyclicProfile back =
        validate_profile(json::parse(serialize_profile(pi).dump()), n);
    REQUIRE(back == pi);
  }
}

TEST_CASE("validate_profile checks shape and range") {
  EventuallyCyclicProfile pi = validate_profile(json::parse(R"({"cycle": [[0.5, 0.5]]})"), 2);
  CHECK(pi.prefix.empty());
  CHECK(pi.cycle.size() == 1);

  CHECK_THROWS_WITH_AS(validate_profile(json::parse(R"({"prefix": [[0.5, 0.5]]})"), 2),
                       doctest::Contains("EmptyCycle"), Error);
  CHECK_THROWS_WITH_AS(validate_profile(json::parse(R"({"cycle": [[1.5, 0.5]]})"), 2),
                       doctest::Contains("BadProbability"), Error);
  CHECK_THROWS_WITH_AS(validate_profile(json::parse(R"({"cycle": [[0.5]]})"), 2),
                       doctest::Contains("BadVectorLength"), Error);

  pi = validate_profile(json::parse(R"({"cycle": [["1/3", "2/3"]]})"), 2);
  CHECK(pi.cycle[0].probs[0] == 1.0 / 3.0);
}

TEST_CASE("load_json_file reports missing files and bad syntax") {
  CHECK_THROWS_WITH_AS(load_json_file("/nonexistent/path.json"),
                       doctest::Contains("FileNotFound"), Error);
}
