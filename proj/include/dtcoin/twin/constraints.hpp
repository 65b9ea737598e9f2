#pragma once

#include <array>

#include "dtcoin/twin/plant.hpp"

namespace dtcoin::twin {

struct Envelope {
  std::array<double, kNumParams> lo{};
  std::array<double, kNumParams> hi{};

  bool contains(const Observation& o) const;
};

struct OperationalBounds {
  Envelope operational;
  Envelope safety;

  // Operational envelope = per-parameter hull of the anchor rows; safety
  // envelope = physical limits of the instrumentation ranges.
  static OperationalBounds standard(const PlantStateTable& table);
};

// Product of the operational and safety indicators over all parameters.
bool check_operational_constraints(const Observation& o, const OperationalBounds& bounds);

}  // namespace dtcoin::twin
