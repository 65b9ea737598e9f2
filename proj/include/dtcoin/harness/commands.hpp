#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dtcoin/game.hpp"
#include "dtcoin/harness/config.hpp"
#include "dtcoin/harness/stats.hpp"
#include "dtcoin/parallel.hpp"
#include "dtcoin/twin/twin_model.hpp"

namespace dtcoin::harness {

// Every CSV starts with "# dtcoin version=<v> config_hash=<hex> command=<name>"
// followed by the column header. Numbers use %.17g so reruns are byte-identical.

// Twin trajectory for the first seed: twin_calibration.csv, twin_operation.csv.
twin::TwinRun cmd_twin(const ExperimentConfig& cfg, const std::filesystem::path& out);

struct GameRow {
  std::uint64_t seed = 0;
  double total_utility = 0.0;
  int updates = 0;
  bool nash = false;
};

// One game per seed in the configured mode: game_moves.jsonl, game_ne.csv,
// game_summary.csv (one row per seed, then mean and std). Throws
// ConvergenceError when a run stops without a certified equilibrium.
std::vector<GameRow> cmd_game(const ExperimentConfig& cfg, const std::filesystem::path& out);

struct TrainSummary {
  int episodes_done = 0;
  double best_validation = 0.0;
  double ddqn = 0.0;
  double rand = 0.0;
  double mec = 0.0;
};

// Trains on the first seed (optionally resuming a checkpoint and stopping
// after `max_episodes` more episodes): checkpoint.json, train_curve.csv,
// train_eval.csv.
TrainSummary cmd_train(const ExperimentConfig& cfg, const std::filesystem::path& out,
                       const std::optional<std::filesystem::path>& resume = std::nullopt,
                       std::optional<int> max_episodes = std::nullopt);

enum class SweepAxis { kSubsystems, kCoinNodes, kTaskType };
SweepAxis parse_axis(std::string_view s);
const char* to_string(SweepAxis a);

struct SweepCell {
  int value = 0;
  std::vector<parallel::SeedOutcome> seeds;
  Summary ddqn;
  Summary rand;
  Summary mec;
  PairedTest ddqn_vs_mec;
  PairedTest ddqn_vs_rand;
};

// All three methods over every seed for each value on the axis:
// sweep_<axis>.csv (per seed) and sweep_<axis>_summary.csv.
std::vector<SweepCell> cmd_sweep(const ExperimentConfig& cfg, SweepAxis axis, const std::filesystem::path& out);
SweepCell run_cell(const ExperimentConfig& cfg, int value, const ScenarioParams& params);

// Exhaustive potential-identity check per seed under the default decision:
// epg.csv. Refuses instances with more than 5e7 joint profiles.
game::EpgReport cmd_verify_epg(const ExperimentConfig& cfg, const std::filesystem::path& out);

}  // namespace dtcoin::harness
