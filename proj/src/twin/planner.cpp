#include "dtcoin/twin/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dtcoin/twin/twin_model.hpp"

namespace dtcoin::twin {

void Mdp::validate() const {
  if (num_states < 1 || num_actions < 1) throw Error(Errc::kConfig, "MDP needs at least one state and action");
  const auto sa = static_cast<std::size_t>(num_states) * num_actions;
  if (transition.size() != sa * num_states || reward.size() != sa) {
    throw Error(Errc::kConfig, "MDP tensor sizes do not match num_states/num_actions");
  }
  for (std::size_t i = 0; i < sa; ++i) {
    double z = 0.0;
    for (int s2 = 0; s2 < num_states; ++s2) {
      const double p = transition[i * num_states + s2];
      if (!(p >= 0.0)) throw Error(Errc::kConfig, "MDP transition probabilities must be >= 0");
      z += p;
    }
    if (std::abs(z - 1.0) > 1e-9) throw Error(Errc::kConfig, "MDP transition rows must sum to 1");
    if (!std::isfinite(reward[i])) throw Error(Errc::kConfig, "MDP rewards must be finite");
  }
}

namespace {

double q_value(const Mdp& mdp, const std::vector<double>& v, int s, int a, double gamma) {
  double acc = 0.0;
  for (int s2 = 0; s2 < mdp.num_states; ++s2) acc += mdp.p(s, a, s2) * v[s2];
  return mdp.r(s, a) + gamma * acc;
}

}  // namespace

ValueIterationResult value_iteration(const Mdp& mdp, double gamma, double tol, int max_sweeps) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw Error(Errc::kDomain, "discount must lie in [0, 1)");
  mdp.validate();
  ValueIterationResult res;
  std::vector<double> v(mdp.num_states, 0.0);
  std::vector<double> next(mdp.num_states);
  for (int sweep = 0;; ++sweep) {
    if (sweep == max_sweeps) {
      throw ConvergenceError("value iteration did not converge", res.residuals.empty() ? 0.0 : res.residuals.back());
    }
    double residual = 0.0;
    for (int s = 0; s < mdp.num_states; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < mdp.num_actions; ++a) best = std::max(best, q_value(mdp, v, s, a, gamma));
      next[s] = best;
      residual = std::max(residual, std::abs(best - v[s]));
    }
    v.swap(next);
    res.residuals.push_back(residual);
    if (residual <= tol) break;
  }
  res.policy.assign(mdp.num_states, 0);
  for (int s = 0; s < mdp.num_states; ++s) {
    double best = q_value(mdp, v, s, 0, gamma);
    for (int a = 1; a < mdp.num_actions; ++a) {
      const double q = q_value(mdp, v, s, a, gamma);
      if (q > best + 1e-12) {
        best = q;
        res.policy[s] = a;
      }
    }
  }
  res.values = std::move(v);
  return res;
}

namespace {

std::vector<int> state_buckets(const TwinModel& model) {
  std::vector<int> q(model.num_states());
  for (int d = 0; d < model.num_states(); ++d) q[d] = model.observation().bucket(model.observation().mean(d));
  return q;
}

}  // namespace

Mdp build_planning_mdp(const TwinModel& model) {
  const int n = model.num_states();
  const int nq = model.observation().num_buckets();
  const int na = model.num_actions();
  const auto bucket_of = state_buckets(model);
  Mdp mdp;
  mdp.num_states = n * nq;
  mdp.num_actions = na;
  mdp.transition.assign(static_cast<std::size_t>(mdp.num_states) * na * mdp.num_states, 0.0);
  mdp.reward.assign(static_cast<std::size_t>(mdp.num_states) * na, 0.0);
  for (int d = 0; d < n; ++d) {
    const auto point = StateBelief::point(n, d);
    for (int u = 0; u < na; ++u) {
      const auto next = model.propagate(point, u);
      const double r = model.evaluate_reward(point, u).total;
      for (int q = 0; q < nq; ++q) {
        const int s = d * nq + q;
        mdp.reward[static_cast<std::size_t>(s) * na + u] = r;
        for (int d2 = 0; d2 < n; ++d2) {
          const int s2 = d2 * nq + bucket_of[d2];
          mdp.transition[(static_cast<std::size_t>(s) * na + u) * mdp.num_states + s2] += next[d2];
        }
      }
    }
  }
  return mdp;
}

Policy plan(const TwinModel& model, double gamma) {
  const auto res = value_iteration(build_planning_mdp(model), gamma);
  Policy p;
  p.num_states = model.num_states();
  p.num_buckets = model.observation().num_buckets();
  p.actions = res.policy;
  p.discount = gamma;
  return p;
}

std::vector<PredictionStep> predict_forward(const TwinModel& model, const StateBelief& belief, const Policy& policy,
                                            int t_c, int t_p,
                                            const std::optional<std::vector<Observation>>& observations) {
  if (t_p < t_c) throw Error(Errc::kConfig, "t_p must be >= t_c");
  const int n = model.num_states();
  if (belief.size() != n || policy.num_states != n) throw Error(Errc::kConfig, "policy/belief size mismatch");
  if (observations && static_cast<int>(observations->size()) < t_p - t_c) {
    throw Error(Errc::kConfig, "need one observation per predicted step");
  }
  const auto bucket_of = state_buckets(model);

  std::vector<PredictionStep> out;
  out.push_back({t_c, belief, {}, {}});
  StateBelief b = belief;
  for (int t = t_c + 1; t <= t_p; ++t) {
    std::vector<double> action_probs(model.num_actions(), 0.0);
    std::vector<double> next(n, 0.0);
    RewardBreakdown r;
    for (int d = 0; d < n; ++d) {
      if (b[d] == 0.0) continue;
      const int u = policy.action(d, bucket_of[d]);
      action_probs[u] += b[d];
      const auto point = StateBelief::point(n, d);
      const auto row = model.propagate(point, u);
      for (int d2 = 0; d2 < n; ++d2) next[d2] += b[d] * row[d2];
      const auto rd = model.evaluate_reward(point, u);
      r.control += b[d] * rd.control;
      r.state += b[d] * rd.state;
      r.obs += b[d] * rd.obs;
    }
    r.total = r.control + r.state + r.obs;
    double z = 0.0;
    for (double x : next) z += x;
    for (double& x : next) x /= z;
    b = StateBelief(std::move(next));
    if (observations) b = model.assimilate(b, (*observations)[t - t_c - 1]);
    out.push_back({t, b, std::move(action_probs), r});
  }
  return out;
}

}  // namespace dtcoin::twin
