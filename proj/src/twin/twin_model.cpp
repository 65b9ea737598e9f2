#include "dtcoin/twin/twin_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace dtcoin::twin {

void TwinConfig::validate() const {
  table.validate();
  if (actions.empty()) throw Error(Errc::kConfig, "at least one control action is required");
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i].id != static_cast<int>(i)) throw Error(Errc::kConfig, "control action ids must be 0..n-1 in order");
  }
  if (extension_states < 0) throw Error(Errc::kConfig, "extension_states must be >= 0");
  if (!(epsilon >= 0.0)) throw Error(Errc::kConfig, "epsilon must be >= 0");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw Error(Errc::kConfig, "gamma must lie in [0, 1)");
  if (t_p < static_cast<int>(table.anchors.size()) - 1) {
    throw Error(Errc::kConfig, "t_p must be >= the calibration end");
  }
  if (!(sensor_noise >= 0.0)) throw Error(Errc::kConfig, "sensor_noise must be >= 0");
}

namespace {

TwinConfig validated(TwinConfig c) {
  c.validate();
  return c;
}

}  // namespace

TwinModel::TwinModel(TwinConfig config)
    : config_(validated(std::move(config))),
      transition_(TransitionParams{config_.num_states(), static_cast<int>(config_.actions.size()), config_.stay,
                                   config_.advance}),
      observation_(config_.table, config_.num_states(), config_.observation) {
  for (int u = 0; u < num_actions(); ++u) action_kernels_.push_back(transition_.action_kernel(u));
}

StateBelief TwinModel::propagate(const StateBelief& b, int action) const {
  if (action < 0 || action >= num_actions()) throw Error(Errc::kIndexOutOfRange, "action id out of range");
  return twin::propagate(b, action_kernels_[action]);
}

StateBelief TwinModel::propagate_marginal(const StateBelief& b) const {
  return twin::propagate(b, transition_.matrix());
}

StateBelief TwinModel::propagate_configuration(const StateBelief& b, const ControlConfig& config) const {
  std::vector<int> ids;
  for (const auto& a : config_.actions) {
    if (a.config == config) ids.push_back(a.id);
  }
  if (ids.empty()) throw Error(Errc::kEmptyConfiguration, "no control action has this configuration");
  return twin::propagate(b, transition_.mixture_kernel(ids));
}

StateBelief TwinModel::assimilate(const StateBelief& b, const Observation& o) const {
  return assimilate_log(b, observation_.log_likelihoods(o));
}

StateBelief TwinModel::step_update(const StateBelief& b, int action_prev, const Observation& o_now) const {
  return assimilate(propagate(b, action_prev), o_now);
}

std::vector<double> TwinModel::control_posterior(const StateBelief& b) const {
  const int n = num_actions();
  std::vector<double> post(n, 0.0);
  double z = 0.0;
  for (int u = 0; u < n; ++u) {
    for (int a = 0; a < b.size(); ++a) {
      if (b[a] > 0.0) post[u] += b[a] * transition_.control_weight(a, u) * transition_.control_prior(u);
    }
    z += post[u];
  }
  if (z <= 0.0) return std::vector<double>(n, 1.0 / n);
  for (double& p : post) p /= z;
  return post;
}

int TwinModel::select_control(const StateBelief& b) const {
  const auto post = control_posterior(b);
  return static_cast<int>(std::max_element(post.begin(), post.end()) - post.begin());
}

RewardBreakdown TwinModel::evaluate_reward(const StateBelief& b, int action) const {
  const auto post = control_posterior(b);
  const double psi_c[] = {post.at(action)};
  const Matrix& k = action_kernels_[action];
  double successor_mass = 0.0;
  for (int a = 0; a < b.size(); ++a) successor_mass += b[a] * k(a, transition_.successor(a));
  const double psi_s[] = {std::clamp(successor_mass, 0.0, 1.0)};
  const auto next = propagate(b, action);
  return make_breakdown(reward_control(psi_c, num_actions(), config_.epsilon), reward_state(psi_s),
                        reward_obs(next.probs(), num_states()));
}

Observation TwinModel::expected_observation(const StateBelief& b) const {
  Observation o;
  for (int s = 0; s < b.size(); ++s) {
    for (std::size_t k = 0; k < kNumParams; ++k) o.values[k] += b[s] * observation_.mean(s).values[k];
  }
  return o;
}

int TwinModel::select_action_min_discrepancy(const StateBelief& b, const StateBelief& target,
                                             const OperationalBounds& bounds) const {
  int best = -1;
  double best_tv = std::numeric_limits<double>::infinity();
  for (int u = 0; u < num_actions(); ++u) {
    const auto pred = propagate(b, u);
    if (!check_operational_constraints(expected_observation(pred), bounds)) continue;
    const double tv = total_variation(pred, target);
    if (tv < best_tv - 1e-12) {
      best_tv = tv;
      best = u;
    }
  }
  return best;
}

namespace {

Observation noisy(const Observation& mean, double noise, Rng& rng) {
  Observation o = mean;
  if (noise <= 0.0) return o;
  std::normal_distribution<double> n01(0.0, 1.0);
  for (auto& v : o.values) v *= 1.0 + noise * n01(rng);
  o[Param::kRP] = std::clamp(o.rp(), 0.0, 100.0);
  return o;
}

}  // namespace

TwinRun run_twin(const TwinModel& model, int t_p, Rng& rng) {
  const auto& cfg = model.config();
  const int calib_end = static_cast<int>(cfg.table.anchors.size()) - 1;
  if (t_p < calib_end) throw Error(Errc::kConfig, "t_p must be >= the calibration end");

  TwinRun run;
  const int n = model.num_states();
  StateBelief belief = StateBelief::uniform(n);
  StateBelief no_control = belief;
  int prev_action = -1;

  for (int t = 0; t <= t_p; ++t) {
    const bool calibrating = t <= calib_end;
    const int realised = std::min(t, model.final_state());
    const Observation o = calibrating ? cfg.table.anchors[t]
                                      : noisy(model.observation().mean(realised), cfg.sensor_noise, rng);
    TwinRow row;
    row.t = t;
    row.phase = calibrating ? "calibration" : "operation";
    row.realised = realised;
    row.observation = o;

    StateBelief forecast = belief;
    StateBelief dyn = belief;
    StateBelief nc_forecast = no_control;
    if (prev_action >= 0) {
      forecast = model.propagate_configuration(belief, cfg.actions[prev_action].config);
      dyn = model.propagate_marginal(belief);
      nc_forecast = model.propagate_marginal(no_control);
    }
    belief = model.assimilate(forecast, o);
    no_control = model.assimilate(nc_forecast, o);

    row.p_dynamics = dyn[realised];
    row.p_control_forecast = forecast[realised];
    row.p_control_posterior = belief[realised];
    row.p_no_control_posterior = no_control[realised];
    row.belief = belief;
    row.control_posterior = model.control_posterior(belief);
    row.action = model.select_control(belief);
    row.reward = model.evaluate_reward(belief, row.action);
    prev_action = row.action;

    (calibrating ? run.calibration : run.operation).push_back(std::move(row));
  }
  return run;
}

double mean_control_forecast(const std::vector<TwinRow>& rows) {
  double s = 0.0;
  int c = 0;
  for (const auto& r : rows) {
    if (r.t < 1) continue;
    s += r.p_control_forecast;
    ++c;
  }
  return c ? s / c : 0.0;
}

}  // namespace dtcoin::twin
