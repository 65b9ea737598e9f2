#pragma once

#include <span>

namespace dtcoin::twin {

struct RewardBreakdown {
  double control = 0.0;
  double state = 0.0;
  double obs = 0.0;
  double total = 0.0;
};

inline RewardBreakdown make_breakdown(double control, double state, double obs) {
  return {control, state, obs, control + state + obs};
}

// Mean over psi of: -epsilon if psi == 0, 1/n if psi == 1/n, |1/n - psi| otherwise.
double reward_control(std::span<const double> psi, int n, double epsilon = 0.05);
// Mean over psi of: -1 if psi == 0, 1 if psi == 1, |1 - psi| otherwise.
double reward_state(std::span<const double> psi);
// Mean over psi of: -0.1 if psi == 0, 1/n if psi == 1/n, |1/n - psi| otherwise.
double reward_obs(std::span<const double> psi, int n);

}  // namespace dtcoin::twin
