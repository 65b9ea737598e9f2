#pragma once

#include <array>
#include <string>
#include <vector>

namespace dtcoin::twin {

inline constexpr std::size_t kNumParams = 6;

// Order matches the observation vector: pressurizer level, reactor coolant
// temperature, reactor coolant pressure, SG pressure, SG level, reactor power.
enum class Param : std::size_t { kPL = 0, kRCT, kRCP, kSGP, kSGL, kRP };

const char* param_name(Param p);

struct Observation {
  std::array<double, kNumParams> values{};

  double operator[](Param p) const { return values[static_cast<std::size_t>(p)]; }
  double& operator[](Param p) { return values[static_cast<std::size_t>(p)]; }
  double pl() const { return (*this)[Param::kPL]; }
  double rct() const { return (*this)[Param::kRCT]; }
  double rcp() const { return (*this)[Param::kRCP]; }
  double sgp() const { return (*this)[Param::kSGP]; }
  double sgl() const { return (*this)[Param::kSGL]; }
  double rp() const { return (*this)[Param::kRP]; }

  bool finite() const;
  // Throws kInvalidObservation unless every entry is finite and rp is in [0, 100].
  void validate() const;

  friend bool operator==(const Observation&, const Observation&) = default;
};

// GOP anchor rows S0..S4 plus the interpolation resolution.
struct PlantStateTable {
  std::vector<Observation> anchors;
  int n_steps = 10;

  static PlantStateTable standard(int n_steps = 10);
  void validate() const;
  std::size_t num_anchors() const { return anchors.size(); }
};

struct LabeledPoint {
  Observation obs;
  int label = 0;    // digital state the point is assigned to
  int segment = 0;  // anchor pair (segment, segment + 1)
  int step = 0;     // s in [0, n_steps]
};

// x_i + (s/n)(x_{i+1} - x_i) for every adjacent anchor pair and s in [0, n].
std::vector<LabeledPoint> interpolate(const PlantStateTable& table);

enum class Boron { kIncrease, kDecrease };

struct ControlConfig {
  std::array<bool, 4> rods{};       // banks A..D
  Boron boron = Boron::kIncrease;
  std::array<bool, 3> feed_pumps{};
  std::array<bool, 3> condenser_pumps{};

  friend bool operator==(const ControlConfig&, const ControlConfig&) = default;
};

struct ControlAction {
  int id = 0;
  ControlConfig config;
};

// U0..U4 from the control-input mapping table, plus U5 which sustains power
// operation with U4's configuration.
std::vector<ControlAction> standard_control_actions();

}  // namespace dtcoin::twin
