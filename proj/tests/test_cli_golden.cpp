#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

std::string cli_path() {
  const char* p = std::getenv("QG_CLI");
  REQUIRE_MESSAGE(p != nullptr, "QG_CLI must point at the command-line binary");
  return p;
}

std::string fixtures_dir() {
  const char* p = std::getenv("QG_FIXTURES");
  REQUIRE_MESSAGE(p != nullptr, "QG_FIXTURES must point at the fixtures directory");
  return p;
}

// Run the CLI with the fixtures directory as working directory so the
// command echo (and thus the byte-exact output) only ever sees relative
// paths.
RunResult run_cli(const std::string& args, bool merge_stderr = false,
                  const std::string& env_prefix = "") {
  std::string cmd = "cd '" + fixtures_dir() + "' && " + env_prefix + "'" + cli_path() + "' " +
                    args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult res;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.output.append(buf, got);
  int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::string read_expected(const std::string& name) {
  std::string path = fixtures_dir() + "/expected/" + name;
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), ("missing expected output file " + path).c_str());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void golden(const std::string& name, const std::string& args) {
  CAPTURE(name);
  CAPTURE(args);
  RunResult res = run_cli(args);
  CHECK(res.exit_code == 0);
  CHECK(res.output == read_expected(name));
}

}  // namespace

TEST_CASE("golden outputs are byte-stable") {
  golden("eval_onestep.golden",
         "--json eval-onestep --game games/penalty.json --v 2,2 --p 0.1,0");
  golden("eval_onestep_human.golden",
         "eval-onestep --game games/penalty.json --v 2,2 --p 0.1,0");
  golden("eval_onestep_input.golden",
         "--json eval-onestep --game games/penalty.json --input onestep/point.json");
  golden("eval_onestep_fractions.golden",
         "--json eval-onestep --game games/tilted.json --v 9/10,10/9 --p 1/10,0");
  golden("check_perfect.golden",
         "--json check-perfect --game games/tilted.json --v 9/10,10/9 --p 0.1,0");
  golden("check_eq.golden", "--json check-eq --game games/penalty.json --v 2,2 --p 0.1,0");
  golden("convert.golden", "--json convert --game games/penalty.json --v 0,2 --p 1,0.1");
  golden("perturb.golden",
         "--json perturb --game games/tilted.json --v 9/10,10/9 --p 0.1,0 --player 1 "
         "--lambda 0.2 --eta 0.1");
  golden("eval.golden", "--json eval --game games/penalty.json --profile profiles/prefix_cycle.json");
  golden("eval_truncate.golden",
         "--json eval --game games/penalty.json --profile profiles/half.json --truncate 50");
  golden("best_response.golden",
         "--json best-response --game games/penalty.json --profile profiles/never.json --player 1");
  golden("check_eq_quitting.golden",
         "--json check-eq-quitting --game games/penalty.json --profile profiles/quit1.json");
  golden("check_subgame.golden",
         "--json check-subgame --game games/penalty.json --profile profiles/prefix_zero.json");
  golden("solve_onestep.golden",
         "--json solve-onestep --game games/penalty.json --v 0,0 --eps 0");
  golden("psi.golden", "--json psi --game games/tightshift.json --v 1,2 --eps 0.1");
  golden("simulate.golden",
         "--json simulate --game games/penalty.json --profile profiles/half.json "
         "--trials 5000 --horizon 50 --seed 3");
}

TEST_CASE("thread count does not change simulation bytes") {
  std::string args =
      "--json simulate --game games/penalty.json --profile profiles/half.json "
      "--trials 5000 --horizon 50 --seed 3";
  RunResult res = run_cli(args, false, "QG_THREADS=4 ");
  CHECK(res.exit_code == 0);
  CHECK(res.output == read_expected("simulate.golden"));
}

TEST_CASE("usage problems exit with code 2") {
  CHECK(run_cli("eval-onestep --game games/penalty.json --v 2,2", true).exit_code == 2);
  CHECK(run_cli("eval-onestep --game games/penalty.json", true).exit_code == 2);
  CHECK(run_cli("nonsense", true).exit_code == 2);
  CHECK(run_cli("eval-onestep", true).exit_code == 2);
  RunResult res = run_cli(
      "--json eval-onestep --game games/penalty.json --input onestep/point.json --v 2,2", true);
  CHECK(res.exit_code == 2);
}

TEST_CASE("domain errors exit with code 1 and name the failure") {
  RunResult res = run_cli("--json psi --game games/tightshift.json --v 1,2 --eps 0", true);
  CHECK(res.exit_code == 1);
  CHECK(res.output.find("BadEpsilon") != std::string::npos);

  res = run_cli("--json eval-onestep --game games/missing.json --v 2,2 --p 0,0", true);
  CHECK(res.exit_code == 1);
  CHECK(res.output.find("FileNotFound") != std::string::npos);

  res = run_cli(
      "--json best-response --game games/penalty.json --profile profiles/never.json --player 3",
      true);
  CHECK(res.exit_code == 1);
  CHECK(res.output.find("BadPlayerIndex") != std::string::npos);

  res = run_cli("--json eval-onestep --game games/penalty.json --v 2,2 --p 0.1,1.5", true);
  CHECK(res.exit_code == 1);
  CHECK(res.output.find("BadProbability") != std::string::npos);

  res = run_cli("--json perturb --game games/tilted.json --v 9/10,10/9 --p 0.1,0 --player 1 "
                "--lambda 1.5 --eta 0.1",
                true);
  CHECK(res.exit_code == 1);
  CHECK(res.output.find("BadLambda") != std::string::npos);
}

TEST_CASE("help is available") {
  CHECK(run_cli("--help", true).exit_code == 0);
  CHECK(run_cli("eval-onestep --help", true).exit_code == 0);
}
