#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dtcoin/orra/agent.hpp"
#include "dtcoin/orra/env.hpp"

namespace dtcoin::orra {

struct TrainConfig {
  AgentConfig agent;
  int episodes = 60;
  int steps_per_episode = 20;
  int validation_every = 10;
  int validation_episodes = 2;
  double reward_scale = 100.0;  // argmax-invariant rescaling of the utility saving

  void validate() const;
};

struct CurveRow {
  int episode = 0;
  double mean_utility = 0.0;
  double loss = 0.0;
  double epsilon = 0.0;
};

// Episode-driven DDQN training on one scenario. The whole state (networks,
// optimiser, replay, random streams, progress) round-trips through a JSON
// checkpoint, so a resumed run reproduces the uninterrupted one exactly.
class Trainer {
 public:
  Trainer(const Scenario& s, TrainConfig cfg, std::uint64_t seed);

  bool done() const { return episode_ >= cfg_.episodes; }
  int episode() const { return episode_; }
  CurveRow run_episode();
  void run();

  DdqnAgent& agent() { return agent_; }
  const DdqnAgent& agent() const { return agent_; }
  const std::vector<CurveRow>& curve() const { return curve_; }
  const std::vector<double>& losses() const { return losses_; }
  double best_validation() const { return best_score_; }
  // Online network replaced by the best-by-validation parameters.
  DdqnAgent best_agent() const;

  std::string checkpoint() const;
  static Trainer resume(const Scenario& s, const std::string& checkpoint_json);

 private:
  double validate_greedy() const;

  const Scenario* scenario_;
  TrainConfig cfg_;
  std::uint64_t seed_;
  Rng rng_;
  DdqnAgent agent_;
  OrraEnv env_;
  int episode_ = 0;
  std::vector<CurveRow> curve_;
  std::vector<double> losses_;
  std::vector<double> best_params_;
  double best_score_;
};

// Mean sum of utilities per slot over `slots` slots of the request stream
// drawn from `seed`. Rand draws its grid actions from a stream derived from
// the same seed; MEC keeps every subsystem on the ES.
double evaluate_mode(const Scenario& s, Mode mode, const DdqnAgent* agent, std::uint64_t seed, int slots,
                     std::vector<double>* rewards = nullptr);

}  // namespace dtcoin::orra
