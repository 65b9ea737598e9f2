#include "dtcoin/twin/reward.hpp"

#include <cmath>

#include "dtcoin/common.hpp"

namespace dtcoin::twin {

namespace {

constexpr double kBranchTol = 1e-12;

double piecewise_mean(std::span<const double> psi, double baseline, double zero_penalty) {
  if (psi.empty()) throw Error(Errc::kEmptyConfiguration, "reward needs at least one configuration (k >= 1)");
  double sum = 0.0;
  for (double p : psi) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::kDomain, "probabilities must lie in [0, 1]");
    if (p == 0.0) {
      sum += zero_penalty;
    } else if (std::abs(p - baseline) <= kBranchTol) {
      sum += baseline;
    } else {
      sum += std::abs(baseline - p);
    }
  }
  return sum / static_cast<double>(psi.size());
}

void check_n(int n) {
  if (n < 1) throw Error(Errc::kDomain, "number of control actions must be >= 1");
}

}  // namespace

double reward_control(std::span<const double> psi, int n, double epsilon) {
  check_n(n);
  return piecewise_mean(psi, 1.0 / n, -epsilon);
}

double reward_state(std::span<const double> psi) { return piecewise_mean(psi, 1.0, -1.0); }

double reward_obs(std::span<const double> psi, int n) {
  check_n(n);
  return piecewise_mean(psi, 1.0 / n, -0.1);
}

}  // namespace dtcoin::twin
