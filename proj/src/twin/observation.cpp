#include "dtcoin/twin/observation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace dtcoin::twin {

std::vector<KappaEntry> ObservationConfig::default_kappa_schedule() {
  std::vector<KappaEntry> s = {
      {{0, 0}, 3.5}, {{0, 1}, 2.5}, {{1, 2}, 2.0}, {{2, 3}, 2.5}, {{3, 4}, 1.0},
  };
  for (int j = 5; j <= 10; ++j) s.push_back({{5, j}, 0.0});
  return s;
}

namespace {

double resolve_kappa(const std::vector<KappaEntry>& schedule, int s, double previous) {
  auto find = [&](auto pred) -> const KappaEntry* {
    for (const auto& e : schedule) {
      if (pred(e.pair)) return &e;
    }
    return nullptr;
  };
  if (const auto* e = find([&](StatePair p) { return p.from == s - 1 && p.to == s; })) return e->kappa;
  if (const auto* e = find([&](StatePair p) { return p.from == s && p.to == s; })) return e->kappa;
  if (const auto* e = find([&](StatePair p) { return p.to == s; })) return e->kappa;
  return previous;
}

}  // namespace

ObservationModel::ObservationModel(const PlantStateTable& table, int num_states, ObservationConfig config)
    : config_(std::move(config)) {
  const int anchors = static_cast<int>(table.anchors.size());
  if (num_states < anchors) {
    throw Error(Errc::kConfig, "observation model needs at least one state per anchor row");
  }
  if (!(config_.kappa_floor > 0.0) || !(config_.variance_floor > 0.0) || !(config_.band_rel > 0.0) ||
      !(config_.band_outside > 0.0 && config_.band_outside < 1.0)) {
    throw Error(Errc::kConfig, "observation floors and band parameters must be positive");
  }
  for (const auto& e : config_.kappa_schedule) {
    if (!(e.kappa >= 0.0) || !std::isfinite(e.kappa)) throw Error(Errc::kConfig, "kappa must be finite and >= 0");
  }
  points_ = interpolate(table);
  num_buckets_ = anchors;

  means_.assign(num_states, Observation{});
  variances_.assign(num_states, {});
  kappas_.assign(num_states, 1.0);

  std::vector<int> count(anchors, 0);
  for (const auto& p : points_) {
    ++count[p.label];
    for (std::size_t k = 0; k < kNumParams; ++k) means_[p.label].values[k] += p.obs.values[k];
  }
  for (int s = 0; s < anchors; ++s) {
    for (auto& v : means_[s].values) v /= count[s];
  }
  for (const auto& p : points_) {
    for (std::size_t k = 0; k < kNumParams; ++k) {
      const double d = p.obs.values[k] - means_[p.label].values[k];
      variances_[p.label][k] += d * d;
    }
  }
  for (int s = 0; s < anchors; ++s) {
    for (auto& v : variances_[s]) {
      v = count[s] > 1 ? v / (count[s] - 1) : 0.0;
      v = std::max(v, config_.variance_floor);
    }
  }
  for (int s = anchors; s < num_states; ++s) {
    means_[s] = table.anchors.back();
    variances_[s] = variances_[anchors - 1];
  }

  double previous = 1.0;
  for (int s = 0; s < num_states; ++s) {
    kappas_[s] = resolve_kappa(config_.kappa_schedule, s, previous);
    previous = kappas_[s];
  }

  for (std::size_t k = 0; k < kNumParams; ++k) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& a : table.anchors) {
      lo = std::min(lo, a.values[k]);
      hi = std::max(hi, a.values[k]);
    }
    scale_[k] = hi > lo ? hi - lo : 1.0;
  }
}

void ObservationModel::check_state(int s) const {
  if (s < 0 || s >= num_states()) {
    throw Error(Errc::kIndexOutOfRange, "state id " + std::to_string(s) + " out of range");
  }
}

const Observation& ObservationModel::mean(int state) const {
  check_state(state);
  return means_[state];
}

const std::array<double, kNumParams>& ObservationModel::variance(int state) const {
  check_state(state);
  return variances_[state];
}

double ObservationModel::kappa(int state) const {
  check_state(state);
  return kappas_[state];
}

bool ObservationModel::uses_band(int state) const { return kappa(state) <= config_.kappa_floor; }

double ObservationModel::effective_variance(int state, std::size_t param) const {
  check_state(state);
  const double k = std::max(kappas_[state], config_.kappa_floor);
  return variances_[state][param] / std::sqrt(k);
}

double ObservationModel::log_likelihood(const Observation& o, int state) const {
  o.validate();
  check_state(state);
  const auto& mu = means_[state];
  double total = 0.0;
  if (uses_band(state)) {
    const double outside = std::log(config_.band_outside);
    for (std::size_t k = 0; k < kNumParams; ++k) {
      const double half = std::max(config_.band_rel * std::abs(mu.values[k]), 1e-12);
      if (std::abs(o.values[k] - mu.values[k]) > half) total += outside;
    }
    return total;
  }
  for (std::size_t k = 0; k < kNumParams; ++k) {
    const double var = effective_variance(state, k);
    const double d = o.values[k] - mu.values[k];
    total += -0.5 * std::log(2.0 * std::numbers::pi * var) - 0.5 * d * d / var;
  }
  return total;
}

double ObservationModel::likelihood(const Observation& o, int state) const {
  return std::exp(log_likelihood(o, state));
}

std::vector<double> ObservationModel::log_likelihoods(const Observation& o) const {
  std::vector<double> out(num_states());
  for (int s = 0; s < num_states(); ++s) out[s] = log_likelihood(o, s);
  return out;
}

int ObservationModel::bucket(const Observation& o) const {
  if (!o.finite()) throw Error(Errc::kInvalidObservation, "observation has a non-finite entry");
  double best = std::numeric_limits<double>::infinity();
  int label = 0;
  for (const auto& p : points_) {
    double d = 0.0;
    for (std::size_t k = 0; k < kNumParams; ++k) {
      const double z = (o.values[k] - p.obs.values[k]) / scale_[k];
      d += z * z;
    }
    if (d < best) {
      best = d;
      label = p.label;
    }
  }
  return label;
}

}  // namespace dtcoin::twin
