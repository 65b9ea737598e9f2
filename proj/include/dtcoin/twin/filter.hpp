#pragma once

#include <span>
#include <vector>

#include "dtcoin/common.hpp"

namespace dtcoin::twin {

// Probability vector over digital states. Construction validates
// non-negativity and a unit sum (within 1e-9) and renormalises exactly.
class StateBelief {
 public:
  StateBelief() = default;
  explicit StateBelief(std::vector<double> probs);

  static StateBelief uniform(int n);
  static StateBelief point(int n, int state);

  int size() const { return static_cast<int>(p_.size()); }
  double operator[](int i) const { return p_[i]; }
  const std::vector<double>& probs() const { return p_; }

  int argmax() const;  // lowest index wins ties
  double entropy() const;  // bits

  friend bool operator==(const StateBelief&, const StateBelief&) = default;

 private:
  std::vector<double> p_;
};

// b' = b^T K.
StateBelief propagate(const StateBelief& belief, const Matrix& kernel);

// posterior[i] proportional to likelihood[i] * belief[i]. Throws kDegenerateEvidence if
// every term vanishes.
StateBelief assimilate(const StateBelief& belief, std::span<const double> likelihoods);
StateBelief assimilate_log(const StateBelief& belief, std::span<const double> log_likelihoods);

// One filtering step: propagate through the kernel, then fold in the evidence.
StateBelief step_update(const StateBelief& belief, const Matrix& kernel, std::span<const double> likelihoods);

double total_variation(const StateBelief& a, const StateBelief& b);

}  // namespace dtcoin::twin
