#pragma once

#include <compare>
#include <map>
#include <span>
#include <tuple>
#include <vector>

#include "dtcoin/common.hpp"

namespace dtcoin::twin {

// (previous digital state, next digital state) as used by the control CPT.
struct StatePair {
  int from = 0;
  int to = 0;
  friend auto operator<=>(const StatePair&, const StatePair&) = default;
};

struct TransitionParams {
  int num_states = 6;
  int num_actions = 6;
  double stay = 0.4;
  double advance = 0.6;
};

// Banded stay/advance chain with an absorbing final state, and the control
// conditional probability table P(U_t | S_{t-1}, S_t).
class TransitionModel {
 public:
  explicit TransitionModel(TransitionParams params = {});

  int num_states() const { return params_.num_states; }
  int num_actions() const { return params_.num_actions; }
  int final_state() const { return params_.num_states - 1; }
  const TransitionParams& params() const { return params_; }
  const Matrix& matrix() const { return matrix_; }

  double transition_prob(int from, int to) const;

  // Listed CPT entries; every other combination is exactly 0.
  double control_likelihood(StatePair prev, StatePair next, int action) const;
  double control_prior(int action) const;

  // P(S_t = b | S_{t-1} = a, u) proportional to P(b | a) P(u | (a,a), (a,b)).
  // A row whose normaliser vanishes keeps the state unchanged.
  Matrix action_kernel(int action) const;
  // Same, with the evidence being "one of these actions" under the uniform
  // action prior (used when only the physical configuration is known).
  Matrix mixture_kernel(std::span<const int> actions) const;

  // Unnormalised weight P(u | a) summed over successors b.
  double control_weight(int state, int action) const;

  // The state the procedure moves to next (itself for the final state).
  int successor(int state) const;

  std::size_t cpt_size() const { return cpt_.size(); }

 private:
  void check_state(int s) const;
  void check_action(int u) const;

  TransitionParams params_;
  Matrix matrix_;
  std::map<std::tuple<StatePair, StatePair, int>, double> cpt_;
};

}  // namespace dtcoin::twin
