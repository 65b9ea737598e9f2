#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "dtcoin/harness/commands.hpp"
#include "test_util.hpp"

using namespace dtcoin;
using namespace dtcoin::harness;
namespace fs = std::filesystem;

namespace {

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    if (e.code() == Errc::kConfig) return e.what();
    return "wrong code";
  }
  return "";
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("dtcoin_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

int cli(const std::string& args) {
  const char* exe = std::getenv("DTCOIN_CLI");
  REQUIRE_MESSAGE(exe != nullptr, "DTCOIN_CLI must point at the command-line tool");
  const std::string cmd = std::string("\"") + exe + "\" " + args + " > /dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

ExperimentConfig tiny() {
  ExperimentConfig c;
  c.scenario.subsystems = 4;
  c.scenario.coin_nodes = 2;
  c.seeds = {0, 1};
  c.train.agent.hidden = {16, 16};
  c.train.agent.batch = 8;
  c.train.episodes = 4;
  c.train.steps_per_episode = 5;
  c.train.validation_every = 2;
  c.train.validation_episodes = 1;
  c.eval_slots = 5;
  return c;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto d = parse_config("{}");
  CHECK(d.seeds.size() == 30u);
  CHECK(d.scenario.subsystems == 6);
  CHECK(d.train.agent.gamma == 0.9);
  CHECK(d.train.agent.replay_capacity == 10000u);

  const auto c = parse_config(R"({"scenario": {"subsystems": 8, "coin_nodes": 3, "task_preset": 4},
                                  "seeds": {"first": 5, "count": 3},
                                  "game": {"mode": "mec", "arbitration": "roundrobin"},
                                  "twin": {"kappa": [[0, 4, 2.0]]},
                                  "out": "results"})");
  CHECK(c.scenario.subsystems == 8);
  CHECK(c.scenario.task_preset == 4);
  CHECK(c.seeds == std::vector<std::uint64_t>{5, 6, 7});
  CHECK(c.mode == orra::Mode::kMec);
  CHECK(c.arbitration == game::Arbitration::kRoundRobin);
  CHECK(c.out_dir == "results");

  CHECK(config_error(R"({"scenario": {"subsystems": 13}})").find("/scenario/subsystems") != std::string::npos);
  CHECK(config_error(R"({"scenario": {"coin_nodes": "three"}})").find("/scenario/coin_nodes: expected an integer") !=
        std::string::npos);
  CHECK(config_error(R"({"scenario": {"colour": 1}})").find("/scenario/colour: unknown key") != std::string::npos);
  CHECK(config_error(R"({"agent": {"hidden": [64, 0]}})").find("/agent/hidden/1") != std::string::npos);
  CHECK(config_error(R"({"seeds": [1, -2]})").find("/seeds/1") != std::string::npos);
  CHECK(config_error(R"({"game": {"mode": "greedy"}})").find("/game/mode") != std::string::npos);
  CHECK(config_error(R"({"twin": {"kappa": [[3, 1, 1.0]]}})").find("/twin/kappa/0") != std::string::npos);
  CHECK(config_error(R"({"sweep": {"task_type": [7]}})").find("/sweep/task_type/0") != std::string::npos);
  CHECK_FALSE(config_error("{not json").empty());
  CHECK_FALSE(config_error("[]").empty());
}

TEST_CASE("config round trip and hash") {
  auto c = parse_config(R"({"scenario": {"subsystems": 10, "deadline": 0.02}, "seeds": [3, 9],
                            "agent": {"hidden": [32], "lr": 0.0005}, "eval_slots": 7})");
  const auto text = to_json(c);
  CHECK(to_json(parse_config(text)) == text);
  CHECK(config_hash(parse_config(text)) == config_hash(c));

  auto moved = c;
  moved.out_dir = "elsewhere";
  CHECK(config_hash(moved) == config_hash(c));
  auto changed = c;
  changed.scenario.coin_nodes += 1;
  CHECK(config_hash(changed) != config_hash(c));
}

TEST_CASE("paired t-test") {
  const std::vector<double> a = {2.1, 3.4, 1.9, 5.0, 4.2, 3.3};
  const std::vector<double> b = {1.8, 3.0, 2.2, 4.1, 3.9, 2.6};
  const auto r = paired_t_test(a, b);
  CHECK(r.n == 6);
  CHECK(r.mean_diff == doctest::Approx(0.3833333333333333));
  CHECK(r.sd_diff == doctest::Approx(0.41190613817551536));
  CHECK(r.t == doctest::Approx(2.2795753232178937));
  CHECK(r.p_greater == doctest::Approx(0.03578804458539164).epsilon(1e-8));
  CHECK(r.lower_bound == doctest::Approx(0.04448284574019945).epsilon(1e-8));

  const std::vector<double> x = {1.0, 2.5, 4.0, -1.0};
  const auto s = summarize(x);
  CHECK(s.mean == doctest::Approx(1.625));
  CHECK(s.stddev == doctest::Approx(2.1360009363293826));

  const std::vector<double> shifted = {3.0, 4.5, 6.0, 1.0};
  const auto deg = paired_t_test(shifted, x);
  CHECK(deg.p_greater == 0.0);
  CHECK(deg.lower_bound == doctest::Approx(2.0));
}

TEST_CASE("twin output files") {
  const auto dir = scratch("twin");
  ExperimentConfig c;
  c.twin.t_p = 4;
  const auto run = cmd_twin(c, dir);
  CHECK(run.operation.empty());
  const auto op = lines(dir / "twin_operation.csv");
  CHECK(op.size() == 2u);
  CHECK(op[0].rfind("# dtcoin version=", 0) == 0);
  CHECK(op[0].find("command=twin") != std::string::npos);
  CHECK(op[1].rfind("t,phase,realised,argmax", 0) == 0);
  CHECK(lines(dir / "twin_calibration.csv").size() == 2u + run.calibration.size());
}

TEST_CASE("game, train and sweep commands") {
  const auto dir = scratch("commands");
  auto c = tiny();
  c.mode = orra::Mode::kRand;
  const auto rows = cmd_game(c, dir / "game");
  CHECK(rows.size() == 2u);
  for (const auto& r : rows) CHECK(r.nash);
  CHECK(lines(dir / "game" / "game_summary.csv").size() == 2u + 2u + 2u);

  c.mode = orra::Mode::kDdqn;
  const auto partial = cmd_train(c, dir / "a", std::nullopt, 2);
  CHECK(partial.episodes_done == 2);
  const auto resumed = cmd_train(c, dir / "a", dir / "a" / "checkpoint.json");
  const auto whole = cmd_train(c, dir / "b");
  CHECK(resumed.episodes_done == 4);
  CHECK(resumed.ddqn == whole.ddqn);
  CHECK(slurp(dir / "a" / "checkpoint.json") == slurp(dir / "b" / "checkpoint.json"));

  c.sweep.coin_nodes = {1, 3};
  const auto cells = cmd_sweep(c, SweepAxis::kCoinNodes, dir / "sweep");
  REQUIRE(cells.size() == 2u);
  CHECK(cells[1].value == 3);
  CHECK(cells[0].ddqn.n == 2);
  CHECK(lines(dir / "sweep" / "sweep_coin_nodes.csv").size() == 2u + 4u);
  CHECK(lines(dir / "sweep" / "sweep_coin_nodes_summary.csv").size() == 2u + 2u);

  CHECK(parse_axis("task_type") == SweepAxis::kTaskType);
  CHECK(dtcoin::testing::error_code([] { parse_axis("area"); }) == Errc::kConfig);
  for (int id = 1; id <= 6; ++id) CHECK(TaskCatalog::preset(id).num_types() == 1);
}

TEST_CASE("command-line tool") {
  const auto dir = scratch("cli");
  write(dir / "bad.json", R"({"scenario": {"subsystems": 2}})");
  write(dir / "stuck.json",
        R"({"scenario": {"subsystems": 8, "coin_nodes": 6, "deadline": 1.0}, "seeds": {"first": 0, "count": 5},
            "game": {"mode": "rand", "max_iters": 1}})");
  const std::string d = dir.string();

  CHECK(cli("--config " + d + "/bad.json game") == 2);
  CHECK(cli("--config " + d + "/missing.json game") == 2);
  CHECK(cli("--frobnicate game") == 2);
  CHECK(cli("--config " + d + "/stuck.json --out " + d + "/stuck game") == 3);

  CHECK(cli("--out " + d + "/r1 --mode rand game") == 0);
  CHECK(cli("--out " + d + "/r2 --mode rand game") == 0);
  CHECK(cli("--out " + d + "/r1 --seed 2 twin") == 0);
  CHECK(cli("--out " + d + "/r2 --seed 2 twin") == 0);
  for (const char* f : {"game_moves.jsonl", "game_ne.csv", "game_summary.csv", "twin_calibration.csv",
                        "twin_operation.csv"}) {
    CAPTURE(f);
    const auto a = slurp(dir / "r1" / f);
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(dir / "r2" / f));
  }
  CHECK(cli("--out " + d + "/epg --seed 0 verify-epg") == 0);
  CHECK(fs::exists(dir / "epg" / "epg.csv"));
}
