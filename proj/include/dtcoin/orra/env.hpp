#pragma once

#include <vector>

#include "dtcoin/game.hpp"
#include "dtcoin/scenario.hpp"

namespace dtcoin::orra {

inline constexpr int kGridPoints = 11;
inline constexpr int kGridActions = kGridPoints * kGridPoints;

struct OrraDecision {
  std::vector<double> phi;   // CN offloading ratio per subsystem
  std::vector<double> beta;  // CN resource fraction per subsystem, sum <= 1
};

// Branch action a -> (phi, beta) = ((a / 11) / 10, (a % 11) / 10); beta is
// scaled down proportionally when its sum exceeds 1.
OrraDecision decode_action(const std::vector<int>& action);
int encode_action(int phi_step, int beta_step);

std::vector<double> encode_state(const std::vector<int>& requests, int num_types);

enum class Mode { kDdqn, kRand, kMec };

struct SlotOutcome {
  double reward = 0.0;
  double utility = 0.0;    // sum of U_m under the decision
  double reference = 0.0;  // sum of U_m with phi = 1 and beta = 1/M on the same nodes
  bool feasible = true;
  game::Strategies strategies;
  int updates = 0;
};

// One slot of the ORRA MDP: the game runs with round-robin arbitration under
// the decoded decision, and the reward is the utility saving over the full
// offloading reference.
SlotOutcome evaluate_slot(const Scenario& s, const std::vector<int>& requests, const std::vector<int>& action,
                          bool allow_cn = true);

class OrraEnv {
 public:
  OrraEnv(const Scenario& s, std::uint64_t seed);

  const Scenario& scenario() const { return *scenario_; }
  const std::vector<int>& requests() const { return requests_; }
  std::vector<double> state() const { return encode_state(requests_, scenario_->num_types()); }
  int state_size() const { return scenario_->num_subsystems() * (scenario_->num_types() + 1); }

  void reset();
  // Restart from the scenario's initial requests with a fresh request stream.
  void reset(std::uint64_t seed);
  SlotOutcome step(const std::vector<int>& action, bool allow_cn = true);

  Rng& rng() { return rng_; }
  const Rng& rng() const { return rng_; }
  void set_requests(std::vector<int> r) { requests_ = std::move(r); }

 private:
  const Scenario* scenario_;
  std::uint64_t seed_;
  Rng rng_;
  std::vector<int> requests_;
};

}  // namespace dtcoin::orra
