#include "dtcoin/twin/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dtcoin::twin {

bool Envelope::contains(const Observation& o) const {
  for (std::size_t k = 0; k < kNumParams; ++k) {
    const double v = o.values[k];
    if (!std::isfinite(v) || v < lo[k] || v > hi[k]) return false;
  }
  return true;
}

OperationalBounds OperationalBounds::standard(const PlantStateTable& table) {
  OperationalBounds b;
  b.operational.lo.fill(std::numeric_limits<double>::infinity());
  b.operational.hi.fill(-std::numeric_limits<double>::infinity());
  for (const auto& a : table.anchors) {
    for (std::size_t k = 0; k < kNumParams; ++k) {
      b.operational.lo[k] = std::min(b.operational.lo[k], a.values[k]);
      b.operational.hi[k] = std::max(b.operational.hi[k], a.values[k]);
    }
  }
  //            PL     RCT    RCP    SGP   SGL    RP
  b.safety.lo = {0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  b.safety.hi = {100.0, 350.0, 175.0, 90.0, 100.0, 100.0};
  return b;
}

bool check_operational_constraints(const Observation& o, const OperationalBounds& bounds) {
  return bounds.operational.contains(o) && bounds.safety.contains(o);
}

}  // namespace dtcoin::twin
