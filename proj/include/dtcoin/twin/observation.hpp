#pragma once

#include <array>
#include <vector>

#include "dtcoin/twin/plant.hpp"
#include "dtcoin/twin/transition.hpp"

namespace dtcoin::twin {

struct KappaEntry {
  StatePair pair;
  double kappa = 1.0;
};

struct ObservationConfig {
  std::vector<KappaEntry> kappa_schedule = default_kappa_schedule();
  double kappa_floor = 1e-3;
  double variance_floor = 1e-4;
  // Tolerance band used when kappa <= kappa_floor.
  double band_rel = 0.01;
  double band_outside = 1e-6;

  static std::vector<KappaEntry> default_kappa_schedule();
};

// Per-state Gaussian observation factor built from the interpolated dataset.
class ObservationModel {
 public:
  ObservationModel(const PlantStateTable& table, int num_states, ObservationConfig config = {});

  int num_states() const { return static_cast<int>(means_.size()); }
  const ObservationConfig& config() const { return config_; }

  const Observation& mean(int state) const;
  const std::array<double, kNumParams>& variance(int state) const;
  double kappa(int state) const;
  bool uses_band(int state) const;

  // Variance actually used by the Gaussian: sigma^2 / sqrt(kappa).
  double effective_variance(int state, std::size_t param) const;

  double log_likelihood(const Observation& o, int state) const;
  double likelihood(const Observation& o, int state) const;
  std::vector<double> log_likelihoods(const Observation& o) const;

  // Label of the nearest interpolated point, distances scaled per parameter
  // by the anchor range. Values lie in [0, num_buckets()).
  int bucket(const Observation& o) const;
  int num_buckets() const { return num_buckets_; }

  const std::vector<LabeledPoint>& dataset() const { return points_; }

 private:
  void check_state(int s) const;

  ObservationConfig config_;
  std::vector<LabeledPoint> points_;
  std::vector<Observation> means_;
  std::vector<std::array<double, kNumParams>> variances_;
  std::vector<double> kappas_;
  std::array<double, kNumParams> scale_{};
  int num_buckets_ = 0;
};

}  // namespace dtcoin::twin
