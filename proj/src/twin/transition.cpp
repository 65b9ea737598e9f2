#include "dtcoin/twin/transition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dtcoin::twin {

namespace {

// Control CPT constants.
constexpr double kHoldGivenSettled = 0.4;
constexpr double kAdvanceGivenSettled = 0.6;
constexpr double kLingerInTransit = 0.1;
constexpr double kArriveFromTransit = 0.4;
constexpr double kHoldFinal = 1.0;
// Transit self-entries are listed for i = 0..3 only.
constexpr int kLastTransitLinger = 3;

}  // namespace

TransitionModel::TransitionModel(TransitionParams params) : params_(params) {
  if (params_.num_states < 2) throw Error(Errc::kConfig, "transition model needs >= 2 states");
  if (params_.num_actions < 1) throw Error(Errc::kConfig, "transition model needs >= 1 action");
  if (params_.stay < 0.0 || params_.advance < 0.0 ||
      std::abs(params_.stay + params_.advance - 1.0) > 1e-12) {
    throw Error(Errc::kConfig, "stay/advance probabilities must be >= 0 and sum to 1");
  }

  const int n = params_.num_states;
  const int last = n - 1;
  matrix_ = Matrix(n, n);
  for (int i = 0; i < last; ++i) {
    matrix_(i, i) = params_.stay;
    matrix_(i, i + 1) = params_.advance;
  }
  matrix_(last, last) = 1.0;

  auto act = [&](int i) { return std::min(i, params_.num_actions - 1); };
  for (int i = 0; i < last; ++i) {
    cpt_[{{i, i}, {i, i}, act(i)}] = kHoldGivenSettled;
    cpt_[{{i, i}, {i, i + 1}, act(i + 1)}] = kAdvanceGivenSettled;
    if (i <= kLastTransitLinger && i + 1 < last) {
      cpt_[{{i, i + 1}, {i, i + 1}, act(i + 1)}] = kLingerInTransit;
    }
    cpt_[{{i, i + 1}, {i + 1, i + 1}, act(i + 1)}] = kArriveFromTransit;
  }
  cpt_[{{last, last}, {last, last}, act(last)}] = kHoldFinal;
}

void TransitionModel::check_state(int s) const {
  if (s < 0 || s >= params_.num_states) {
    throw Error(Errc::kIndexOutOfRange, "state id " + std::to_string(s) + " out of range");
  }
}

void TransitionModel::check_action(int u) const {
  if (u < 0 || u >= params_.num_actions) {
    throw Error(Errc::kIndexOutOfRange, "action id " + std::to_string(u) + " out of range");
  }
}

double TransitionModel::transition_prob(int from, int to) const {
  check_state(from);
  check_state(to);
  return matrix_(from, to);
}

double TransitionModel::control_likelihood(StatePair prev, StatePair next, int action) const {
  check_state(prev.from);
  check_state(prev.to);
  check_state(next.from);
  check_state(next.to);
  check_action(action);
  const auto it = cpt_.find({prev, next, action});
  return it == cpt_.end() ? 0.0 : it->second;
}

double TransitionModel::control_prior(int action) const {
  check_action(action);
  return 1.0 / params_.num_actions;
}

Matrix TransitionModel::mixture_kernel(std::span<const int> actions) const {
  for (int u : actions) check_action(u);
  const int n = params_.num_states;
  Matrix k(n, n);
  for (int a = 0; a < n; ++a) {
    double z = 0.0;
    for (int b = 0; b < n; ++b) {
      if (matrix_(a, b) == 0.0) continue;
      double w = 0.0;
      for (int u : actions) w += control_likelihood({a, a}, {a, b}, u) * control_prior(u);
      k(a, b) = matrix_(a, b) * w;
      z += k(a, b);
    }
    if (z > 0.0) {
      for (int b = 0; b < n; ++b) k(a, b) /= z;
    } else {
      k(a, a) = 1.0;
    }
  }
  return k;
}

Matrix TransitionModel::action_kernel(int action) const {
  const int one[] = {action};
  return mixture_kernel(one);
}

double TransitionModel::control_weight(int state, int action) const {
  check_state(state);
  check_action(action);
  double w = 0.0;
  for (int b = 0; b < params_.num_states; ++b) {
    if (matrix_(state, b) > 0.0) w += matrix_(state, b) * control_likelihood({state, state}, {state, b}, action);
  }
  return w;
}

int TransitionModel::successor(int state) const {
  check_state(state);
  return std::min(state + 1, params_.num_states - 1);
}

}  // namespace dtcoin::twin
