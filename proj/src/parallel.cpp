#include "dtcoin/parallel.hpp"

#include <algorithm>
#include <exception>

#include <omp.h>

namespace dtcoin::parallel {

namespace {

constexpr std::uint64_t kEvalSalt = 0xA5A5A5A55A5A5A5AULL;
constexpr int kMaxGridSubsystems = 3;

std::int64_t grid_size(int m) {
  std::int64_t n = 1;
  for (int i = 0; i < m; ++i) n *= orra::kGridActions;
  return n;
}

std::vector<int> grid_action(std::int64_t idx, int m) {
  std::vector<int> a(m);
  for (int i = m - 1; i >= 0; --i) {
    a[i] = static_cast<int>(idx % orra::kGridActions);
    idx /= orra::kGridActions;
  }
  return a;
}

void check_grid(const Scenario& s, const std::vector<int>& requests) {
  if (s.num_subsystems() > kMaxGridSubsystems) throw Error(Errc::kConfig, "exhaustive grid search needs M <= 3");
  if (static_cast<int>(requests.size()) != s.num_subsystems()) throw Error(Errc::kConfig, "request vector size");
}

struct Candidate {
  std::int64_t idx = -1;
  double reward = 0.0;
};

bool better(const Candidate& a, const Candidate& b) {
  if (b.idx < 0) return a.idx >= 0;
  if (a.idx < 0) return false;
  if (a.reward != b.reward) return a.reward > b.reward;
  return a.idx < b.idx;
}

GridBest finish(const Candidate& c, int m) { return {grid_action(c.idx, m), c.reward}; }

}  // namespace

SeedOutcome run_seed(const CellSpec& cell, std::uint64_t seed) {
  const Scenario s = make_scenario(cell.scenario, seed);
  orra::Trainer tr(s, cell.train, seed);
  tr.run();
  const orra::DdqnAgent agent = tr.best_agent();
  const std::uint64_t eval = seed ^ kEvalSalt;
  SeedOutcome out;
  out.seed = seed;
  out.ddqn = orra::evaluate_mode(s, orra::Mode::kDdqn, &agent, eval, cell.eval_slots);
  out.rand = orra::evaluate_mode(s, orra::Mode::kRand, nullptr, eval, cell.eval_slots);
  out.mec = orra::evaluate_mode(s, orra::Mode::kMec, nullptr, eval, cell.eval_slots);
  return out;
}

std::vector<SeedOutcome> sweep_seeds_serial(const CellSpec& cell, const std::vector<std::uint64_t>& seeds) {
  std::vector<SeedOutcome> out;
  out.reserve(seeds.size());
  for (auto seed : seeds) out.push_back(run_seed(cell, seed));
  return out;
}

std::vector<SeedOutcome> sweep_seeds(const CellSpec& cell, const std::vector<std::uint64_t>& seeds) {
  const auto n = static_cast<std::int64_t>(seeds.size());
  std::vector<SeedOutcome> out(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      out[i] = run_seed(cell, seeds[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

GridBest grid_best_serial(const Scenario& s, const std::vector<int>& requests) {
  check_grid(s, requests);
  const int m = s.num_subsystems();
  Candidate best;
  for (std::int64_t i = 0, n = grid_size(m); i < n; ++i) {
    const Candidate c{i, orra::evaluate_slot(s, requests, grid_action(i, m)).reward};
    if (better(c, best)) best = c;
  }
  return finish(best, m);
}

GridBest grid_best(const Scenario& s, const std::vector<int>& requests) {
  check_grid(s, requests);
  const int m = s.num_subsystems();
  const std::int64_t n = grid_size(m);
  std::vector<Candidate> local(omp_get_max_threads());
  std::vector<std::exception_ptr> errors(local.size());
#pragma omp parallel
  {
    const int tid = omp_get_thread_num();
    Candidate& best = local[tid];
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      if (errors[tid]) continue;
      try {
        const Candidate c{i, orra::evaluate_slot(s, requests, grid_action(i, m)).reward};
        if (better(c, best)) best = c;
      } catch (...) {
        errors[tid] = std::current_exception();
      }
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  Candidate best;
  for (const auto& c : local) {
    if (better(c, best)) best = c;
  }
  return finish(best, m);
}

game::EpgReport verify_epg(const game::GameContext& ctx, const game::UtilityTable& t, double rel_tol) {
  const std::int64_t total = game::epg_profile_count(t);
  const std::int64_t chunks = std::min<std::int64_t>(total, 256);
  std::vector<game::EpgReport> parts(chunks);
  std::vector<std::exception_ptr> errors(chunks);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t c = 0; c < chunks; ++c) {
    try {
      parts[c] = game::verify_epg_range(ctx, t, total * c / chunks, total * (c + 1) / chunks, rel_tol);
    } catch (...) {
      errors[c] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  game::EpgReport r;
  for (const auto& p : parts) r.merge(p);
  return r;
}

}  // namespace dtcoin::parallel
