#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dtcoin/orra/mlp.hpp"
#include "dtcoin/orra/replay.hpp"

namespace dtcoin::orra {

struct AgentConfig {
  std::vector<int> hidden = {64, 64};
  AdamConfig adam;
  double gamma = 0.9;
  std::size_t batch = 64;
  int target_sync = 200;
  std::size_t replay_capacity = 10000;
  double eps_start = 1.0;
  double eps_end = 0.05;
  double anneal_fraction = 0.5;
  double grad_clip = 10.0;

  void validate() const;
};

// Linear decay from eps_start to eps_end over the first anneal_fraction of
// the episodes, constant afterwards.
double epsilon_at(const AgentConfig& cfg, int episode, int episodes);

// Double DQN with one output branch per subsystem. The target is shared by
// all branches: y = r + gamma * mean_m Q_target,m(s', argmax_a Q_online,m(s', a)).
class DdqnAgent {
 public:
  DdqnAgent(int state_size, int branches, int actions_per_branch, AgentConfig cfg, Rng& init_rng);

  int state_size() const { return online_.input_size(); }
  int branches() const { return branches_; }
  int actions_per_branch() const { return actions_; }
  const AgentConfig& config() const { return cfg_; }

  std::vector<double> q_online(std::span<const double> state) const { return online_.forward(state); }
  std::vector<double> q_target(std::span<const double> state) const { return target_.forward(state); }

  // Per-branch argmax; the lowest index wins ties.
  std::vector<int> greedy(std::span<const double> state) const;
  std::vector<int> act(std::span<const double> state, double epsilon, Rng& rng) const;

  void remember(Transition t) { replay_.push(std::move(t)); }
  // One gradient step on a sampled batch; nullopt when the buffer is empty.
  std::optional<double> train_step(Rng& rng);
  // Mean squared TD error over the batch and branches; grad receives dL/dtheta
  // for the online parameters.
  double loss_and_grad(std::span<const Transition* const> batch, std::vector<double>& grad) const;
  double loss(std::span<const Transition* const> batch) const;

  void sync_target() { target_.params() = online_.params(); }

  Mlp& online() { return online_; }
  Mlp& target() { return target_; }
  const Mlp& online() const { return online_; }
  const Mlp& target() const { return target_; }
  Adam& optimizer() { return adam_; }
  const Adam& optimizer() const { return adam_; }
  ReplayBuffer& replay() { return replay_; }
  const ReplayBuffer& replay() const { return replay_; }
  long long train_steps() const { return train_steps_; }
  void set_train_steps(long long n) { train_steps_ = n; }

 private:
  std::vector<double> targets(std::span<const Transition* const> batch) const;

  AgentConfig cfg_;
  int branches_;
  int actions_;
  Mlp online_;
  Mlp target_;
  Adam adam_;
  ReplayBuffer replay_;
  long long train_steps_ = 0;
};

}  // namespace dtcoin::orra
