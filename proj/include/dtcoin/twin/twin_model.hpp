#pragma once

#include <string>
#include <vector>

#include "dtcoin/twin/constraints.hpp"
#include "dtcoin/twin/filter.hpp"
#include "dtcoin/twin/observation.hpp"
#include "dtcoin/twin/plant.hpp"
#include "dtcoin/twin/reward.hpp"
#include "dtcoin/twin/transition.hpp"

namespace dtcoin::twin {

struct TwinConfig {
  PlantStateTable table = PlantStateTable::standard();
  std::vector<ControlAction> actions = standard_control_actions();
  double stay = 0.4;
  double advance = 0.6;
  ObservationConfig observation;
  int extension_states = 1;  // operation states appended after S4
  double epsilon = 0.05;
  double gamma = 0.6;
  int t_p = 20;                 // last operation step
  double sensor_noise = 0.001;  // relative, operation phase only

  int num_states() const { return static_cast<int>(table.anchors.size()) + extension_states; }
  void validate() const;
};

class TwinModel {
 public:
  explicit TwinModel(TwinConfig config = {});

  const TwinConfig& config() const { return config_; }
  const TransitionModel& transition() const { return transition_; }
  const ObservationModel& observation() const { return observation_; }
  int num_states() const { return transition_.num_states(); }
  int num_actions() const { return transition_.num_actions(); }
  int final_state() const { return transition_.final_state(); }

  StateBelief propagate(const StateBelief& b, int action) const;
  // No control evidence: the plain stay/advance chain.
  StateBelief propagate_marginal(const StateBelief& b) const;
  // Evidence is the physical configuration: every action sharing it, mixed
  // under the uniform action prior.
  StateBelief propagate_configuration(const StateBelief& b, const ControlConfig& config) const;
  StateBelief assimilate(const StateBelief& b, const Observation& o) const;
  StateBelief step_update(const StateBelief& b, int action_prev, const Observation& o_now) const;

  // P(U_t = u | belief), uniform when no action has support.
  std::vector<double> control_posterior(const StateBelief& b) const;
  int select_control(const StateBelief& b) const;

  RewardBreakdown evaluate_reward(const StateBelief& b, int action) const;

  // Action minimising the total-variation gap between the predicted belief
  // and the target, among actions whose predicted mean observation passes the
  // operational constraints. Returns -1 if none qualifies.
  int select_action_min_discrepancy(const StateBelief& b, const StateBelief& target,
                                    const OperationalBounds& bounds) const;

  Observation expected_observation(const StateBelief& b) const;

 private:
  TwinConfig config_;
  TransitionModel transition_;
  ObservationModel observation_;
  std::vector<Matrix> action_kernels_;
};

struct TwinRow {
  int t = 0;
  std::string phase;  // "calibration" or "operation"
  int realised = 0;
  StateBelief belief;
  int action = 0;
  RewardBreakdown reward;
  double p_dynamics = 0.0;            // P(D_t | D_{t-1}) forecast on the realised state
  double p_control_forecast = 0.0;    // P(D_t | D_{t-1}, U_{t-1}) before O_t
  double p_control_posterior = 0.0;   // ... after O_t
  double p_no_control_posterior = 0.0;  // P(D_t | D_{t-1}, O_t)
  std::vector<double> control_posterior;
  Observation observation;
};

struct TwinRun {
  std::vector<TwinRow> calibration;
  std::vector<TwinRow> operation;
};

// Calibration t = 0..4 with the anchor rows, then operation t = 5..t_p with
// noisy readings of the final state.
TwinRun run_twin(const TwinModel& model, int t_p, Rng& rng);

// Mean p_control_forecast over rows with t >= 1.
double mean_control_forecast(const std::vector<TwinRow>& rows);

}  // namespace dtcoin::twin
