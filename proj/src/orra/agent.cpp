#include "dtcoin/orra/agent.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace dtcoin::orra {

void AgentConfig::validate() const {
  for (int h : hidden) {
    if (h < 1) throw Error(Errc::kConfig, "hidden layer sizes must be >= 1");
  }
  if (!(adam.lr > 0.0)) throw Error(Errc::kConfig, "learning rate must be > 0");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw Error(Errc::kConfig, "agent gamma must lie in [0, 1)");
  if (batch < 1) throw Error(Errc::kConfig, "batch must be >= 1");
  if (target_sync < 1) throw Error(Errc::kConfig, "target_sync must be >= 1");
  if (replay_capacity < 1) throw Error(Errc::kConfig, "replay_capacity must be >= 1");
  if (!(eps_start >= 0.0 && eps_start <= 1.0 && eps_end >= 0.0 && eps_end <= 1.0)) {
    throw Error(Errc::kConfig, "epsilon bounds must lie in [0, 1]");
  }
  if (!(anneal_fraction > 0.0 && anneal_fraction <= 1.0)) {
    throw Error(Errc::kConfig, "anneal_fraction must lie in (0, 1]");
  }
  if (!(grad_clip > 0.0)) throw Error(Errc::kConfig, "grad_clip must be > 0");
}

double epsilon_at(const AgentConfig& cfg, int episode, int episodes) {
  const double span = cfg.anneal_fraction * std::max(episodes, 1);
  const double frac = std::min(1.0, episode / span);
  return cfg.eps_start + (cfg.eps_end - cfg.eps_start) * frac;
}

namespace {

std::vector<int> make_sizes(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> s{in};
  s.insert(s.end(), hidden.begin(), hidden.end());
  s.push_back(out);
  return s;
}

}  // namespace

DdqnAgent::DdqnAgent(int state_size, int branches, int actions_per_branch, AgentConfig cfg, Rng& init_rng)
    : cfg_(std::move(cfg)), branches_(branches), actions_(actions_per_branch), replay_(cfg_.replay_capacity) {
  cfg_.validate();
  if (state_size < 1 || branches < 1 || actions_per_branch < 1) {
    throw Error(Errc::kConfig, "agent dimensions must be >= 1");
  }
  online_ = Mlp(make_sizes(state_size, cfg_.hidden, branches * actions_per_branch), init_rng);
  target_ = online_;
  adam_ = Adam(online_.num_params(), cfg_.adam);
}

std::vector<int> DdqnAgent::greedy(std::span<const double> state) const {
  const auto q = q_online(state);
  std::vector<int> a(branches_);
  for (int m = 0; m < branches_; ++m) {
    const auto first = q.begin() + static_cast<std::ptrdiff_t>(m) * actions_;
    a[m] = static_cast<int>(std::max_element(first, first + actions_) - first);
  }
  return a;
}

std::vector<int> DdqnAgent::act(std::span<const double> state, double epsilon, Rng& rng) const {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < epsilon) {
    std::uniform_int_distribution<int> pick(0, actions_ - 1);
    std::vector<int> a(branches_);
    for (auto& x : a) x = pick(rng);
    return a;
  }
  return greedy(state);
}

std::vector<double> DdqnAgent::targets(std::span<const Transition* const> batch) const {
  std::vector<double> y(batch.size());
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const Transition& t = *batch[b];
    y[b] = t.reward;
    if (t.terminal) continue;
    const auto next_action = greedy(t.next_state);
    const auto qt = q_target(t.next_state);
    double v = 0.0;
    for (int m = 0; m < branches_; ++m) v += qt[static_cast<std::size_t>(m) * actions_ + next_action[m]];
    y[b] += cfg_.gamma * v / branches_;
  }
  return y;
}

double DdqnAgent::loss_and_grad(std::span<const Transition* const> batch, std::vector<double>& grad) const {
  grad.assign(online_.num_params(), 0.0);
  if (batch.empty()) return 0.0;
  const auto y = targets(batch);
  const double norm = static_cast<double>(batch.size()) * branches_;
  double loss = 0.0;
  Mlp::Cache cache;
  std::vector<double> d_out(online_.output_size());
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const Transition& t = *batch[b];
    const auto q = online_.forward(t.state, cache);
    std::fill(d_out.begin(), d_out.end(), 0.0);
    for (int m = 0; m < branches_; ++m) {
      const std::size_t k = static_cast<std::size_t>(m) * actions_ + t.action[m];
      const double diff = q[k] - y[b];
      loss += diff * diff / norm;
      d_out[k] = 2.0 * diff / norm;
    }
    online_.backward(cache, d_out, grad);
  }
  return loss;
}

double DdqnAgent::loss(std::span<const Transition* const> batch) const {
  std::vector<double> g;
  return loss_and_grad(batch, g);
}

std::optional<double> DdqnAgent::train_step(Rng& rng) {
  if (replay_.empty()) return std::nullopt;
  const auto idx = replay_.sample(cfg_.batch, rng);
  std::vector<const Transition*> batch;
  batch.reserve(idx.size());
  for (auto i : idx) batch.push_back(&replay_.at(i));
  std::vector<double> grad;
  const double l = loss_and_grad(batch, grad);
  clip_grad_norm(grad, cfg_.grad_clip);
  adam_.step(online_.params(), grad);
  ++train_steps_;
  if (train_steps_ % cfg_.target_sync == 0) sync_target();
  return l;
}

}  // namespace dtcoin::orra
