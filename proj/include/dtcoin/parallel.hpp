#pragma once

#include <cstdint>
#include <vector>

#include "dtcoin/game.hpp"
#include "dtcoin/orra/trainer.hpp"
#include "dtcoin/scenario.hpp"

// OpenMP kernels. Each has a serial twin that produces identical results; the
// parallel versions only change the schedule, never the arithmetic per item.
namespace dtcoin::parallel {

struct CellSpec {
  ScenarioParams scenario;
  orra::TrainConfig train;
  int eval_slots = 20;
};

struct SeedOutcome {
  std::uint64_t seed = 0;
  double ddqn = 0.0;  // mean sum of U_m per slot
  double rand = 0.0;
  double mec = 0.0;
};

// Builds the scenario for `seed`, trains an agent on it and evaluates the
// three methods on a held-out request stream.
SeedOutcome run_seed(const CellSpec& cell, std::uint64_t seed);
std::vector<SeedOutcome> sweep_seeds(const CellSpec& cell, const std::vector<std::uint64_t>& seeds);
std::vector<SeedOutcome> sweep_seeds_serial(const CellSpec& cell, const std::vector<std::uint64_t>& seeds);

struct GridBest {
  std::vector<int> action;
  double reward = 0.0;
};

// Exhaustive search of the 121^M joint grid for one slot; ties go to the
// lowest joint index. Limited to M <= 3.
GridBest grid_best(const Scenario& s, const std::vector<int>& requests);
GridBest grid_best_serial(const Scenario& s, const std::vector<int>& requests);

game::EpgReport verify_epg(const game::GameContext& ctx, const game::UtilityTable& t, double rel_tol = 1e-9);

}  // namespace dtcoin::parallel
