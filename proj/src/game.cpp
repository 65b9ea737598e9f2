#include "dtcoin/game.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace dtcoin::game {

GameContext make_context(const Scenario& s, std::vector<int> requests, std::vector<double> lambda,
                         std::vector<double> beta, bool allow_cn) {
  const auto m = static_cast<std::size_t>(s.num_subsystems());
  if (requests.size() != m || lambda.size() != m || beta.size() != m) {
    throw Error(Errc::kConfig, "requests/lambda/beta must have one entry per subsystem");
  }
  GameContext ctx;
  ctx.scenario = &s;
  ctx.tasks = s.tasks_for(requests);
  ctx.requests = std::move(requests);
  ctx.lambda = std::move(lambda);
  ctx.beta = std::move(beta);
  ctx.allow_cn = allow_cn;
  return ctx;
}

GameContext default_context(const Scenario& s, std::vector<int> requests, bool allow_cn) {
  const auto m = static_cast<std::size_t>(s.num_subsystems());
  return make_context(s, std::move(requests), std::vector<double>(m, 0.5), std::vector<double>(m, 1.0 / m), allow_cn);
}

UtilityTable build_table(const GameContext& ctx) {
  const Scenario& sc = *ctx.scenario;
  UtilityTable t;
  t.num_subsystems = ctx.num_subsystems();
  t.num_cn = sc.num_cn();
  const auto cells = static_cast<std::size_t>(t.num_subsystems) * (t.num_cn + 1);
  t.active.assign(t.num_subsystems, 0);
  t.blocked.assign(t.num_subsystems, 0);
  t.defined.assign(cells, 0);
  t.feasible.assign(cells, 0);
  t.u.assign(cells, 0.0);
  for (int m = 0; m < t.num_subsystems; ++m) {
    if (ctx.requests[m] <= 0) continue;
    if (!(sc.rates[m][0] > 0.0)) {
      t.blocked[m] = 1;
      continue;
    }
    t.active[m] = 1;
    const auto& task = ctx.tasks[m];
    t.u[t.idx(m, kEs)] = offload::plan_utility(task, offload::Plan{}, sc.fleet, sc.rates[m], sc.params.econ);
    t.defined[t.idx(m, kEs)] = 1;
    t.feasible[t.idx(m, kEs)] = 1;
    if (!ctx.allow_cn) continue;
    for (int k = 1; k <= t.num_cn; ++k) {
      const offload::Plan plan{k, ctx.lambda[m], ctx.beta[m]};
      try {
        const double latency = offload::e2e_latency(task, plan, sc.fleet, sc.rates[m]).total;
        t.u[t.idx(m, k)] = offload::plan_utility(task, plan, sc.fleet, sc.rates[m], sc.params.econ);
        t.defined[t.idx(m, k)] = 1;
        t.feasible[t.idx(m, k)] = latency <= task.deadline;
      } catch (const Error&) {
        // Not in S_m: zero CN resources or an unreachable CN.
      }
    }
  }
  return t;
}

Strategies all_es(const UtilityTable& t) {
  Strategies s(t.num_subsystems, kInactive);
  for (int m = 0; m < t.num_subsystems; ++m) {
    if (t.active[m]) s[m] = kEs;
  }
  return s;
}

bool occupied_by_other(const Strategies& s, int m, int j) {
  if (j == kEs) return false;
  for (int n = 0; n < static_cast<int>(s.size()); ++n) {
    if (n != m && s[n] == j) return true;
  }
  return false;
}

namespace {

void check_profile(const UtilityTable& t, const Strategies& s) {
  if (static_cast<int>(s.size()) != t.num_subsystems) throw Error(Errc::kConstraintViolation, "profile size mismatch");
  std::vector<int> users(t.num_cn + 1, 0);
  for (int m = 0; m < t.num_subsystems; ++m) {
    if (!t.active[m]) {
      if (s[m] != kInactive) throw Error(Errc::kConstraintViolation, "inactive subsystem holds a strategy");
      continue;
    }
    if (s[m] < 0 || s[m] > t.num_cn || !t.is_defined(m, s[m])) {
      throw Error(Errc::kConstraintViolation, "subsystem " + std::to_string(m) + " holds an undefined strategy");
    }
    if (s[m] > 0 && ++users[s[m]] > 1) {
      throw Error(Errc::kConstraintViolation,
                  "exclusive-cn: CN " + std::to_string(s[m]) + " serves several subsystems");
    }
  }
}

double strict_margin(double u) { return 1e-12 * std::max(1.0, std::abs(u)); }

}  // namespace

double potential(const UtilityTable& t, const Strategies& s) {
  check_profile(t, s);
  double phi = 0.0;
  for (int m = 0; m < t.num_subsystems; ++m) {
    if (t.active[m]) phi += t.utility(m, s[m]);
  }
  return phi;
}

double total_utility(const UtilityTable& t, const Strategies& s) { return potential(t, s); }

int best_response(const UtilityTable& t, int m, const Strategies& s) {
  if (!t.active[m]) return kInactive;
  int best = kEs;
  double best_u = t.utility(m, kEs);
  for (int k = 1; k <= t.num_cn; ++k) {
    if (!t.is_feasible(m, k) || occupied_by_other(s, m, k)) continue;
    const double u = t.utility(m, k);
    if (u > best_u + strict_margin(best_u)) {
      best_u = u;
      best = k;
    }
  }
  return best;
}

int default_max_iters(int m, int k) { return 10 * m * (k + 1); }

GameResult run_game(const UtilityTable& t, Arbitration arb, Rng& rng, int max_iters) {
  if (max_iters <= 0) max_iters = default_max_iters(t.num_subsystems, t.num_cn);
  GameResult res;
  res.strategies = all_es(t);
  double phi = potential(t, res.strategies);
  res.potential_trace.push_back(phi);
  int rr_next = 0;
  std::vector<int> pending;
  std::vector<int> target(t.num_subsystems, kInactive);
  while (true) {
    ++res.slots;
    pending.clear();
    for (int m = 0; m < t.num_subsystems; ++m) {
      if (!t.active[m]) continue;
      const int br = best_response(t, m, res.strategies);
      const double cur = t.utility(m, res.strategies[m]);
      if (br != res.strategies[m] && t.utility(m, br) > cur + strict_margin(cur)) {
        pending.push_back(m);
        target[m] = br;
      }
    }
    if (pending.empty()) {
      res.converged = true;
      break;
    }
    if (res.updates >= max_iters) break;
    int winner = pending.front();
    if (arb == Arbitration::kRandom) {
      std::uniform_int_distribution<std::size_t> pick(0, pending.size() - 1);
      winner = pending[pick(rng)];
    } else {
      auto it = std::lower_bound(pending.begin(), pending.end(), rr_next);
      winner = it == pending.end() ? pending.front() : *it;
      rr_next = winner + 1;
    }
    Move mv;
    mv.iteration = ++res.updates;
    mv.mover = winner;
    mv.from = res.strategies[winner];
    mv.to = target[winner];
    mv.du = t.utility(winner, mv.to) - t.utility(winner, mv.from);
    res.strategies[winner] = mv.to;
    const double next_phi = potential(t, res.strategies);
    mv.dphi = next_phi - phi;
    phi = next_phi;
    res.potential_trace.push_back(phi);
    res.moves.push_back(mv);
  }
  res.total_utility = phi;
  return res;
}

bool is_nash_equilibrium(const UtilityTable& t, const Strategies& s, double tol) {
  check_profile(t, s);
  for (int m = 0; m < t.num_subsystems; ++m) {
    if (!t.active[m]) continue;
    const double cur = t.utility(m, s[m]);
    for (int j = 0; j <= t.num_cn; ++j) {
      if (!t.is_feasible(m, j) || occupied_by_other(s, m, j)) continue;
      if (t.utility(m, j) > cur + tol) return false;
    }
  }
  return true;
}

offload::OffloadProfile to_profile(const GameContext& ctx, const Strategies& s) {
  offload::OffloadProfile p(ctx.num_subsystems(), ctx.num_cn());
  for (int m = 0; m < ctx.num_subsystems(); ++m) {
    if (s[m] == kInactive) continue;
    offload::Plan plan;
    plan.node = s[m];
    plan.lambda = s[m] == kEs ? 0.0 : ctx.lambda[m];
    plan.beta = ctx.beta[m];
    p.set_plan(m, plan);
  }
  return p;
}

void EpgReport::merge(const EpgReport& o) {
  profiles += o.profiles;
  deviations += o.deviations;
  case1 += o.case1;
  case2 += o.case2;
  trivial += o.trivial;
  failures += o.failures;
  max_rel_error = std::max(max_rel_error, o.max_rel_error);
}

namespace {

std::vector<std::vector<int>> strategy_sets(const UtilityTable& t) {
  std::vector<std::vector<int>> sets(t.num_subsystems);
  for (int m = 0; m < t.num_subsystems; ++m) {
    if (!t.active[m]) continue;
    for (int j = 0; j <= t.num_cn; ++j) {
      if (t.is_defined(m, j)) sets[m].push_back(j);
    }
  }
  return sets;
}

bool cn_exclusive(const Strategies& s) {
  for (std::size_t a = 0; a < s.size(); ++a) {
    if (s[a] <= 0) continue;
    for (std::size_t b = a + 1; b < s.size(); ++b) {
      if (s[b] == s[a]) return false;
    }
  }
  return true;
}

}  // namespace

std::int64_t epg_profile_count(const UtilityTable& t) {
  std::int64_t n = 1;
  for (const auto& set : strategy_sets(t)) {
    if (!set.empty()) n *= static_cast<std::int64_t>(set.size());
  }
  return n;
}

EpgReport verify_epg_range(const GameContext& ctx, const UtilityTable& t, std::int64_t begin, std::int64_t end,
                           double rel_tol) {
  const auto sets = strategy_sets(t);
  const Scenario& sc = *ctx.scenario;
  EpgReport rep;
  Strategies s(t.num_subsystems, kInactive);
  for (std::int64_t idx = begin; idx < end; ++idx) {
    std::int64_t rem = idx;
    for (int m = 0; m < t.num_subsystems; ++m) {
      if (sets[m].empty()) continue;
      const auto base = static_cast<std::int64_t>(sets[m].size());
      s[m] = sets[m][rem % base];
      rem /= base;
    }
    if (!cn_exclusive(s)) continue;
    ++rep.profiles;
    const double phi = potential(t, s);
    const auto prof = to_profile(ctx, s);
    for (int m = 0; m < t.num_subsystems; ++m) {
      if (sets[m].empty()) continue;
      const double u_here = offload::utility(m, prof, ctx.tasks, sc.fleet, sc.rates, sc.params.econ);
      for (int alt : sets[m]) {
        if (occupied_by_other(s, m, alt)) continue;
        Strategies dev = s;
        dev[m] = alt;
        const double lhs = phi - potential(t, dev);
        const double rhs =
            u_here - offload::utility(m, to_profile(ctx, dev), ctx.tasks, sc.fleet, sc.rates, sc.params.econ);
        const double scale = std::max(std::abs(lhs), std::abs(rhs));
        const double err = std::abs(lhs - rhs);
        const double rel = scale > 0.0 ? err / scale : 0.0;
        rep.max_rel_error = std::max(rep.max_rel_error, rel);
        if (rel > rel_tol) ++rep.failures;
        ++rep.deviations;
        if (alt == s[m]) {
          ++rep.trivial;
        } else if (alt == kEs || s[m] == kEs) {
          ++rep.case1;
        } else {
          ++rep.case2;
        }
      }
    }
  }
  return rep;
}

EpgReport verify_epg(const GameContext& ctx, const UtilityTable& t, double rel_tol) {
  return verify_epg_range(ctx, t, 0, epg_profile_count(t), rel_tol);
}

}  // namespace dtcoin::game
