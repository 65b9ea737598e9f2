#include <omp.h>

#include "doctest.h"
#include "dtcoin/parallel.hpp"
#include "test_util.hpp"

using namespace dtcoin;
using dtcoin::testing::error_code;

namespace {

struct Threads {
  explicit Threads(int n) : saved(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~Threads() { omp_set_num_threads(saved); }
  int saved;
};

ScenarioParams params(int m, int k) {
  ScenarioParams p;
  p.subsystems = m;
  p.coin_nodes = k;
  p.deadline = 1.0;
  return p;
}

}  // namespace

TEST_CASE("grid search matches the serial scan") {
  Threads t(4);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto s = make_scenario(params(2, 2), seed);
    const auto par = parallel::grid_best(s, s.initial_requests);
    const auto ser = parallel::grid_best_serial(s, s.initial_requests);
    CHECK(par.action == ser.action);
    CHECK(par.reward == ser.reward);
    CHECK(orra::evaluate_slot(s, s.initial_requests, par.action).reward == par.reward);
  }
  const auto one = make_scenario(params(1, 2), 4);
  const auto best = parallel::grid_best_serial(one, one.initial_requests);
  for (int a = 0; a < orra::kGridActions; ++a) {
    CHECK(orra::evaluate_slot(one, one.initial_requests, {a}).reward <= best.reward);
  }
  const auto big = make_scenario(params(4, 2), 0);
  CHECK(error_code([&] { parallel::grid_best(big, big.initial_requests); }) == Errc::kConfig);
}

TEST_CASE("potential check matches the serial sweep") {
  Threads t(3);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    auto s = make_scenario(params(4, 3), seed);
    s.initial_requests = {1, 2, 3, 1};
    const auto ctx = game::default_context(s, s.initial_requests);
    const auto table = game::build_table(ctx);
    const auto par = parallel::verify_epg(ctx, table);
    const auto ser = game::verify_epg(ctx, table);
    CHECK(par.profiles == ser.profiles);
    CHECK(par.deviations == ser.deviations);
    CHECK(par.case1 == ser.case1);
    CHECK(par.case2 == ser.case2);
    CHECK(par.trivial == ser.trivial);
    CHECK(par.failures == ser.failures);
    CHECK(par.max_rel_error == ser.max_rel_error);
    CHECK(par.ok());
  }
}

TEST_CASE("seed sweep matches the serial loop") {
  Threads t(3);
  parallel::CellSpec cell;
  cell.scenario = params(3, 2);
  cell.train.agent.hidden = {16, 16};
  cell.train.agent.batch = 8;
  cell.train.episodes = 4;
  cell.train.steps_per_episode = 5;
  cell.train.validation_every = 2;
  cell.train.validation_episodes = 1;
  cell.eval_slots = 5;
  const std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  const auto par = parallel::sweep_seeds(cell, seeds);
  const auto ser = parallel::sweep_seeds_serial(cell, seeds);
  REQUIRE(par.size() == ser.size());
  for (std::size_t i = 0; i < par.size(); ++i) {
    CHECK(par[i].seed == seeds[i]);
    CHECK(par[i].seed == ser[i].seed);
    CHECK(par[i].ddqn == ser[i].ddqn);
    CHECK(par[i].rand == ser[i].rand);
    CHECK(par[i].mec == ser[i].mec);
  }
  const auto single = parallel::run_seed(cell, 3);
  CHECK(single.ddqn == ser[3].ddqn);

  parallel::CellSpec broken = cell;
  broken.train.episodes = 0;
  CHECK(error_code([&] { parallel::sweep_seeds(broken, seeds); }) == Errc::kConfig);
}
