#pragma once

#include <cstdint>
#include <vector>

#include "dtcoin/common.hpp"
#include "dtcoin/offload.hpp"
#include "dtcoin/scenario.hpp"

namespace dtcoin::game {

inline constexpr int kInactive = -1;
inline constexpr int kEs = 0;

// Everything a best response needs: the scenario, the current requests and
// the ORRA decision (lambda = CN ratio, beta = CN resource fraction).
struct GameContext {
  const Scenario* scenario = nullptr;
  std::vector<int> requests;
  std::vector<offload::Task> tasks;
  std::vector<double> lambda;
  std::vector<double> beta;
  bool allow_cn = true;

  int num_subsystems() const { return static_cast<int>(requests.size()); }
  int num_cn() const { return scenario->num_cn(); }
};

GameContext make_context(const Scenario& s, std::vector<int> requests, std::vector<double> lambda,
                         std::vector<double> beta, bool allow_cn = true);
// lambda = 0.5, beta = equal share among subsystems.
GameContext default_context(const Scenario& s, std::vector<int> requests, bool allow_cn = true);

// Utility of each (subsystem, strategy) pair. U_m depends only on s_m because
// the uplink rates do not depend on the other players' choices.
struct UtilityTable {
  int num_subsystems = 0;
  int num_cn = 0;
  std::vector<char> active;    // has a task and a reachable ES
  std::vector<char> blocked;   // has a task but no ES uplink
  std::vector<char> defined;   // strategy is in S_m (latency computable)
  std::vector<char> feasible;  // defined and within the deadline; ES always
  std::vector<double> u;

  std::size_t idx(int m, int j) const { return static_cast<std::size_t>(m) * (num_cn + 1) + j; }
  double utility(int m, int j) const { return u[idx(m, j)]; }
  bool is_defined(int m, int j) const { return defined[idx(m, j)] != 0; }
  bool is_feasible(int m, int j) const { return feasible[idx(m, j)] != 0; }
};

UtilityTable build_table(const GameContext& ctx);

using Strategies = std::vector<int>;  // kInactive, kEs or CN id

Strategies all_es(const UtilityTable& t);
bool occupied_by_other(const Strategies& s, int m, int j);

// sum_m sum_j s_mj R_mj. Throws kConstraintViolation on an invalid profile.
double potential(const UtilityTable& t, const Strategies& s);
double total_utility(const UtilityTable& t, const Strategies& s);

// Feasible argmax; ties go to ES, then the lowest CN id.
int best_response(const UtilityTable& t, int m, const Strategies& s);

enum class Arbitration { kRandom, kRoundRobin };

struct Move {
  int iteration = 0;
  int mover = 0;
  int from = 0;
  int to = 0;
  double du = 0.0;
  double dphi = 0.0;
};

struct GameResult {
  Strategies strategies;
  int updates = 0;
  int slots = 0;
  bool converged = false;
  std::vector<double> potential_trace;  // initial value, then one per update
  std::vector<Move> moves;
  double total_utility = 0.0;
};

int default_max_iters(int m, int k);

// Best-response dynamics from all-ES, one winner per slot, until no
// subsystem can improve (certified NE) or max_iters updates were made.
GameResult run_game(const UtilityTable& t, Arbitration arb, Rng& rng, int max_iters = 0);

bool is_nash_equilibrium(const UtilityTable& t, const Strategies& s, double tol = 1e-9);

offload::OffloadProfile to_profile(const GameContext& ctx, const Strategies& s);

struct EpgReport {
  std::int64_t profiles = 0;
  std::int64_t deviations = 0;
  std::int64_t case1 = 0;   // ES <-> CN
  std::int64_t case2 = 0;   // CN j -> CN j'
  std::int64_t trivial = 0;  // s' = s
  std::int64_t failures = 0;
  double max_rel_error = 0.0;

  bool ok() const { return failures == 0; }
  void merge(const EpgReport& o);
};

// Number of joint profiles the exhaustive check walks (product of |S_m|).
std::int64_t epg_profile_count(const UtilityTable& t);
// Checks phi(s) - phi(s') = U_m(s) - U_m(s') for every unilateral deviation
// from profiles [begin, end) of the mixed-radix enumeration, with U_m taken
// from the offloading model directly.
EpgReport verify_epg_range(const GameContext& ctx, const UtilityTable& t, std::int64_t begin, std::int64_t end,
                           double rel_tol = 1e-9);
EpgReport verify_epg(const GameContext& ctx, const UtilityTable& t, double rel_tol = 1e-9);

}  // namespace dtcoin::game
