#pragma once

#include <optional>
#include <vector>

#include "dtcoin/twin/filter.hpp"
#include "dtcoin/twin/plant.hpp"
#include "dtcoin/twin/reward.hpp"

namespace dtcoin::twin {

class TwinModel;

// Finite MDP. transition[(s * A + a) * S + s'], reward[s * A + a].
struct Mdp {
  int num_states = 0;
  int num_actions = 0;
  std::vector<double> transition;
  std::vector<double> reward;

  double p(int s, int a, int s2) const {
    return transition[(static_cast<std::size_t>(s) * num_actions + a) * num_states + s2];
  }
  double r(int s, int a) const { return reward[static_cast<std::size_t>(s) * num_actions + a]; }
  void validate() const;
};

struct ValueIterationResult {
  std::vector<double> values;
  std::vector<int> policy;       // greedy, lowest action id on ties (1e-12)
  std::vector<double> residuals;  // sup-norm change per sweep
};

ValueIterationResult value_iteration(const Mdp& mdp, double gamma, double tol = 1e-12, int max_sweeps = 100000);

struct Policy {
  int num_states = 0;
  int num_buckets = 0;
  std::vector<int> actions;  // [d * num_buckets + q]
  double discount = 0.6;

  int action(int d, int q) const { return actions[static_cast<std::size_t>(d) * num_buckets + q]; }
};

// Product MDP over (digital state, observation bucket); q' is the bucket of the
// next state's mean observation.
Mdp build_planning_mdp(const TwinModel& model);
Policy plan(const TwinModel& model, double gamma = 0.6);

struct PredictionStep {
  int t = 0;
  StateBelief belief;
  std::vector<double> action_probs;  // empty at the first entry
  RewardBreakdown reward;
};

// Rolls the network forward from t_c to t_p under the deterministic policy.
// Without observations no assimilation happens; otherwise observations[i]
// is assimilated at t_c + 1 + i.
std::vector<PredictionStep> predict_forward(const TwinModel& model, const StateBelief& belief, const Policy& policy,
                                            int t_c, int t_p,
                                            const std::optional<std::vector<Observation>>& observations = {});

}  // namespace dtcoin::twin
