// End-to-end checks of the command-line surface: file format, exit codes,
// JSON reports, and witness replay through `utility`.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "doctest.h"

namespace {

using nlohmann::json;

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::filesystem::path out =
      std::filesystem::temp_directory_path() /
      ("qv_cli_out_" + std::to_string(::getpid()) + ".txt");
  const std::string command =
      std::string(QV_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
  const int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out);
  std::stringstream buffer;
  buffer << in.rdbuf();
  result.output = buffer.str();
  std::filesystem::remove(out);
  return result;
}

std::string data_file(const std::string& name) {
  return std::string(QV_DATA_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("winner command reports the worked example") {
  const RunResult r = run_cli("winner " + data_file("worked_tally.qv.json") + " --json");
  CHECK(r.exit_code == 0);
  const json out = json::parse(r.output);
  CHECK(out["totals"] == json::array({3, 3, -2}));
  CHECK(out["winners"] == json::array({0, 1}));
  CHECK(out["probabilities"] == json::array({"1/2", "1/2", "0"}));
}

TEST_CASE("utility command with and without refund") {
  const std::string file = data_file("worked_tally.qv.json");
  const RunResult plain = run_cli("utility " + file + " --agent 0 --json");
  CHECK(plain.exit_code == 0);
  CHECK(json::parse(plain.output)["utility"] == "-41");

  const RunResult refunded =
      run_cli("utility " + file + " --agent 0 --with-refund --json");
  CHECK(json::parse(refunded.output)["utility"] == "55");
}

TEST_CASE("verify-ne exit codes distinguish the decision") {
  CHECK(run_cli("verify-ne " + data_file("zero_budget.qv.json")).exit_code == 0);
  CHECK(run_cli("verify-ne " + data_file("abstention.qv.json")).exit_code == 2);
}

TEST_CASE("deviate emits a witness that utility accepts back") {
  const RunResult r =
      run_cli("deviate " + data_file("betrayal_budget16.qv.json") + " --agent 0 --json");
  CHECK(r.exit_code == 0);
  const json out = json::parse(r.output);
  CHECK(out["found"] == true);
  CHECK(out["utility"] == "900");

  const auto replay_path = std::filesystem::temp_directory_path() / "qv_replay.qv.json";
  {
    std::ofstream replay(replay_path);
    replay << out["replay"].dump();
  }
  const RunResult replayed =
      run_cli("utility " + replay_path.string() + " --agent 0 --json");
  CHECK(replayed.exit_code == 0);
  CHECK(json::parse(replayed.output)["utility"] == out["utility"]);
  std::filesystem::remove(replay_path);
}

TEST_CASE("verify-ne witnesses replay through utility") {
  const RunResult r =
      run_cli("verify-ne " + data_file("abstention.qv.json") + " --json");
  CHECK(r.exit_code == 2);
  const json out = json::parse(r.output);
  CHECK(out["equilibrium"] == false);
  const json witness = out["witness"];

  const auto replay_path =
      std::filesystem::temp_directory_path() / "qv_ne_replay.qv.json";
  {
    std::ofstream replay(replay_path);
    replay << witness["replay"].dump();
  }
  const RunResult replayed =
      run_cli("utility " + replay_path.string() + " --agent " +
              witness["agent"].dump() + " --json");
  CHECK(replayed.exit_code == 0);
  // The replayed utility equals the original plus the reported gain.
  const RunResult before =
      run_cli("utility " + data_file("abstention.qv.json") + " --agent " +
              witness["agent"].dump() + " --json");
  const auto parse_rat = [](const json& j) {
    const std::string s = j.get<std::string>();
    const auto slash = s.find('/');
    if (slash == std::string::npos) return std::pair<long, long>{std::stol(s), 1};
    return std::pair<long, long>{std::stol(s.substr(0, slash)),
                                 std::stol(s.substr(slash + 1))};
  };
  const auto [an, ad] = parse_rat(json::parse(replayed.output)["utility"]);
  const auto [bn, bd] = parse_rat(json::parse(before.output)["utility"]);
  const auto [gn, gd] = parse_rat(witness["gain"]);
  // a == b + g  <=>  a*bd*gd == bn*ad*gd + gn*ad*bd
  CHECK(an * bd * gd == bn * ad * gd + gn * ad * bd);
  std::filesystem::remove(replay_path);
}

TEST_CASE("deviate agrees with its oracle and reports absence with exit 2") {
  const RunResult none =
      run_cli("deviate " + data_file("abstention.qv.json") + " --agent 0 --json");
  CHECK(none.exit_code == 2);
  CHECK(json::parse(none.output)["found"] == false);

  const RunResult oracle = run_cli("deviate " + data_file("abstention.qv.json") +
                                   " --agent 0 --oracle --max-votes 12 --json");
  CHECK(oracle.exit_code == 2);
}

TEST_CASE("collude cancel reproduces the cancellation trace") {
  const RunResult r = run_cli("collude cancel " + data_file("cancellation.qv.json") +
                              " --outcome 0 --coalition 0,1,2,3,4 --json");
  CHECK(r.exit_code == 0);
  const json out = json::parse(r.output);
  CHECK(out["after_column"] == json::array({0, 0, 2, 0, 1}));
  CHECK(out["d_trace"] == json::array({10, 3, 3, 0, 0}));
  CHECK(out["check"]["ok"] == true);
}

TEST_CASE("collude cycle applies the worked transfer") {
  const RunResult r = run_cli("collude cycle " + data_file("transfer_cycle.qv.json") + " --json");
  CHECK(r.exit_code == 0);
  const json out = json::parse(r.output);
  CHECK(out["found"] == true);
  CHECK(out["profile_after"] ==
        json::array({{2, 0, 2}, {2, 2, 0}, {0, 5, 3}}));
  CHECK(out["payments_before"] == json::array({"10", "10", "40"}));
  CHECK(out["payments_after"] == json::array({"8", "8", "34"}));

  const RunResult acyclic =
      run_cli("collude cycle " + data_file("nocycle.qv.json") + " --json");
  CHECK(acyclic.exit_code == 2);
  CHECK(json::parse(acyclic.output)["graph_has_cycle"] == false);
}

TEST_CASE("compare runs a classical rule next to the tally") {
  const RunResult r =
      run_cli("compare " + data_file("majority.qv.json") + " --rule plurality --json");
  CHECK(r.exit_code == 0);
  const json out = json::parse(r.output);
  CHECK(out["winners"] == json::array({0}));
  CHECK(out["qv_winners"] == json::array({1}));
}

TEST_CASE("criteria command surfaces violations with exit 2") {
  const RunResult nfb = run_cli("criteria " + data_file("betrayal_budget16.qv.json") +
                                " --rule qv --criterion nfb --trials 0 --json");
  CHECK(nfb.exit_code == 2);
  const json out = json::parse(nfb.output);
  CHECK(out["holds"] == false);
  CHECK(out["witness"].contains("betrayal_ballot"));

  const RunResult consistent =
      run_cli("criteria " + data_file("worked_tally.qv.json") +
              " --rule qv --criterion consistency --seed 3 --trials 50 --json");
  CHECK(consistent.exit_code == 0);
}

TEST_CASE("malformed files exit 1 and name the field") {
  const auto bad_path = std::filesystem::temp_directory_path() / "qv_bad.qv.json";
  {
    std::ofstream bad(bad_path);
    bad << R"({"variant": "no_budget", "utilities": [[1, 2]]})";
  }
  const RunResult r = run_cli("winner " + bad_path.string());
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("alpha") != std::string::npos);
  std::filesystem::remove(bad_path);

  CHECK(run_cli("winner /nonexistent.qv.json").exit_code == 1);
  CHECK(run_cli("nonsense-subcommand").exit_code == 1);
}
