#include "dtcoin/twin/filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace dtcoin::twin {

namespace {

std::vector<double> normalised(std::vector<double> v, const char* what) {
  double z = 0.0;
  for (double x : v) z += x;
  if (!(z > 0.0) || !std::isfinite(z)) throw Error(Errc::kDegenerateEvidence, what);
  for (double& x : v) x /= z;
  return v;
}

}  // namespace

StateBelief::StateBelief(std::vector<double> probs) {
  if (probs.empty()) throw Error(Errc::kConfig, "belief must have at least one state");
  double z = 0.0;
  for (double x : probs) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw Error(Errc::kDomain, "belief entries must be finite and >= 0");
    z += x;
  }
  if (std::abs(z - 1.0) > 1e-9) {
    throw Error(Errc::kDomain, "belief entries must sum to 1 (got " + std::to_string(z) + ")");
  }
  for (double& x : probs) x /= z;
  p_ = std::move(probs);
}

StateBelief StateBelief::uniform(int n) {
  if (n < 1) throw Error(Errc::kConfig, "belief must have at least one state");
  return StateBelief(std::vector<double>(n, 1.0 / n));
}

StateBelief StateBelief::point(int n, int state) {
  if (state < 0 || state >= n) throw Error(Errc::kIndexOutOfRange, "point-mass state out of range");
  std::vector<double> v(n, 0.0);
  v[state] = 1.0;
  return StateBelief(std::move(v));
}

int StateBelief::argmax() const {
  return static_cast<int>(std::max_element(p_.begin(), p_.end()) - p_.begin());
}

double StateBelief::entropy() const {
  double h = 0.0;
  for (double x : p_) {
    if (x > 0.0) h -= x * std::log2(x);
  }
  return h;
}

StateBelief propagate(const StateBelief& belief, const Matrix& kernel) {
  const auto n = static_cast<std::size_t>(belief.size());
  if (kernel.rows() != n || kernel.cols() != n) throw Error(Errc::kConfig, "kernel shape does not match belief");
  std::vector<double> out(n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    const double w = belief[static_cast<int>(a)];
    if (w == 0.0) continue;
    for (std::size_t b = 0; b < n; ++b) out[b] += w * kernel(a, b);
  }
  return StateBelief(normalised(std::move(out), "propagated belief has zero mass"));
}

StateBelief assimilate(const StateBelief& belief, std::span<const double> likelihoods) {
  if (likelihoods.size() != static_cast<std::size_t>(belief.size())) {
    throw Error(Errc::kConfig, "likelihood vector size does not match belief");
  }
  std::vector<double> post(likelihoods.size());
  for (std::size_t i = 0; i < post.size(); ++i) {
    if (!(likelihoods[i] >= 0.0)) throw Error(Errc::kDomain, "likelihoods must be >= 0");
    post[i] = likelihoods[i] * belief[static_cast<int>(i)];
  }
  return StateBelief(normalised(std::move(post), "all posterior terms vanish"));
}

StateBelief assimilate_log(const StateBelief& belief, std::span<const double> log_likelihoods) {
  if (log_likelihoods.size() != static_cast<std::size_t>(belief.size())) {
    throw Error(Errc::kConfig, "likelihood vector size does not match belief");
  }
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < log_likelihoods.size(); ++i) {
    if (belief[static_cast<int>(i)] > 0.0) shift = std::max(shift, log_likelihoods[i]);
  }
  if (!std::isfinite(shift)) throw Error(Errc::kDegenerateEvidence, "all posterior terms vanish");
  std::vector<double> post(log_likelihoods.size());
  for (std::size_t i = 0; i < post.size(); ++i) {
    post[i] = belief[static_cast<int>(i)] * std::exp(log_likelihoods[i] - shift);
  }
  return StateBelief(normalised(std::move(post), "all posterior terms vanish"));
}

StateBelief step_update(const StateBelief& belief, const Matrix& kernel, std::span<const double> likelihoods) {
  return assimilate(propagate(belief, kernel), likelihoods);
}

double total_variation(const StateBelief& a, const StateBelief& b) {
  if (a.size() != b.size()) throw Error(Errc::kConfig, "beliefs have different dimensions");
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

}  // namespace dtcoin::twin
