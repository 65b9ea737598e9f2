#include "dtcoin/orra/env.hpp"

#include <cmath>

namespace dtcoin::orra {

OrraDecision decode_action(const std::vector<int>& action) {
  OrraDecision d;
  double beta_sum = 0.0;
  for (int a : action) {
    if (a < 0 || a >= kGridActions) throw Error(Errc::kIndexOutOfRange, "grid action out of range");
    d.phi.push_back((a / kGridPoints) * 0.1);
    d.beta.push_back((a % kGridPoints) * 0.1);
    beta_sum += d.beta.back();
  }
  if (beta_sum > 1.0) {
    for (double& b : d.beta) b /= beta_sum;
  }
  return d;
}

int encode_action(int phi_step, int beta_step) {
  if (phi_step < 0 || phi_step >= kGridPoints || beta_step < 0 || beta_step >= kGridPoints) {
    throw Error(Errc::kIndexOutOfRange, "grid step out of range");
  }
  return phi_step * kGridPoints + beta_step;
}

std::vector<double> encode_state(const std::vector<int>& requests, int num_types) {
  std::vector<double> x(requests.size() * static_cast<std::size_t>(num_types + 1), 0.0);
  for (std::size_t m = 0; m < requests.size(); ++m) {
    if (requests[m] < 0 || requests[m] > num_types) throw Error(Errc::kIndexOutOfRange, "request type out of range");
    x[m * (num_types + 1) + requests[m]] = 1.0;
  }
  return x;
}

SlotOutcome evaluate_slot(const Scenario& s, const std::vector<int>& requests, const std::vector<int>& action,
                          bool allow_cn) {
  const auto decision = decode_action(action);
  const auto ctx = game::make_context(s, requests, decision.phi, decision.beta, allow_cn);
  const auto table = game::build_table(ctx);
  Rng unused(0);
  const auto res = game::run_game(table, game::Arbitration::kRoundRobin, unused);

  SlotOutcome out;
  out.strategies = res.strategies;
  out.updates = res.updates;
  out.utility = res.total_utility;
  const int m_count = s.num_subsystems();
  for (int m = 0; m < m_count; ++m) {
    const int j = res.strategies[m];
    if (j == game::kInactive) continue;
    double ref = table.utility(m, game::kEs);
    if (j != game::kEs) {
      try {
        ref = offload::plan_utility(ctx.tasks[m], offload::Plan{j, 1.0, 1.0 / m_count}, s.fleet, s.rates[m],
                                    s.params.econ);
      } catch (const Error&) {
        // Full offloading to this CN is undefined; fall back to the ES value.
      }
    }
    out.reference += ref;
  }
  out.feasible =
      res.converged && !offload::check_constraints(game::to_profile(ctx, res.strategies), ctx.tasks, s.fleet, s.rates);
  out.reward = out.feasible ? out.utility - out.reference : -10.0 * std::abs(out.reference);
  return out;
}

OrraEnv::OrraEnv(const Scenario& s, std::uint64_t seed) : scenario_(&s), seed_(seed), rng_(seed) { reset(); }

void OrraEnv::reset() { reset(seed_); }

void OrraEnv::reset(std::uint64_t seed) {
  rng_.seed(seed);
  requests_ = scenario_->initial_requests;
}

SlotOutcome OrraEnv::step(const std::vector<int>& action, bool allow_cn) {
  auto out = evaluate_slot(*scenario_, requests_, action, allow_cn);
  requests_ = step_requests(requests_, scenario_->num_types(), scenario_->params.persistence, rng_);
  return out;
}

}  // namespace dtcoin::orra
