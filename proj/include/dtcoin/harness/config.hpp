#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dtcoin/game.hpp"
#include "dtcoin/orra/trainer.hpp"
#include "dtcoin/scenario.hpp"
#include "dtcoin/twin/twin_model.hpp"

namespace dtcoin::harness {

struct SweepAxes {
  std::vector<int> subsystems = {4, 6, 8, 10, 12};
  std::vector<int> coin_nodes = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<int> task_type = {1, 2, 3, 4, 5, 6};
};

struct ExperimentConfig {
  ScenarioParams scenario;
  std::vector<std::uint64_t> seeds;  // defaults to 0..29
  twin::TwinConfig twin;
  game::Arbitration arbitration = game::Arbitration::kRandom;
  int max_iters = 0;  // 0 = 10 M (K + 1)
  orra::Mode mode = orra::Mode::kDdqn;
  orra::TrainConfig train;
  int eval_slots = 20;
  SweepAxes sweep;
  std::string out_dir = "out";

  ExperimentConfig();
};

// Missing keys keep their defaults; unknown keys, wrong types and out-of-range
// values raise a kConfig error naming the JSON path, e.g. "/scenario/subsystems".
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::string& path);

// Canonical JSON with every field spelled out; parse_config(to_json(c)) == c.
std::string to_json(const ExperimentConfig& c);
std::uint64_t config_hash(const ExperimentConfig& c);

const char* to_string(orra::Mode m);
const char* to_string(game::Arbitration a);
orra::Mode parse_mode(std::string_view s);
game::Arbitration parse_arbitration(std::string_view s);

}  // namespace dtcoin::harness
