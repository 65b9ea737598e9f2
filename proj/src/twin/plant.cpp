#include "dtcoin/twin/plant.hpp"

#include <cmath>
#include <sstream>

#include "dtcoin/common.hpp"

namespace dtcoin {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::kInvalidResolution: return "invalid-resolution";
    case Errc::kIndexOutOfRange: return "index-out-of-range";
    case Errc::kInvalidObservation: return "invalid-observation";
    case Errc::kDegenerateEvidence: return "degenerate-evidence";
    case Errc::kEmptyConfiguration: return "empty-configuration";
    case Errc::kConvergence: return "convergence";
    case Errc::kInvalidGeometry: return "invalid-geometry";
    case Errc::kDegenerateChannel: return "degenerate-channel";
    case Errc::kDomain: return "domain";
    case Errc::kUnreachable: return "unreachable-destination";
    case Errc::kInvalidTwinDeviation: return "invalid-twin-deviation";
    case Errc::kConstraintViolation: return "constraint-violation";
    case Errc::kConfig: return "config";
  }
  return "unknown";
}

}  // namespace dtcoin

namespace dtcoin::twin {

const char* param_name(Param p) {
  switch (p) {
    case Param::kPL: return "PL";
    case Param::kRCT: return "RCT";
    case Param::kRCP: return "RCP";
    case Param::kSGP: return "SGP";
    case Param::kSGL: return "SGL";
    case Param::kRP: return "RP";
  }
  return "?";
}

bool Observation::finite() const {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void Observation::validate() const {
  if (!finite()) throw Error(Errc::kInvalidObservation, "observation has a non-finite entry");
  if (rp() < 0.0 || rp() > 100.0) {
    std::ostringstream os;
    os << "reactor power " << rp() << " outside [0, 100]";
    throw Error(Errc::kInvalidObservation, os.str());
  }
}

PlantStateTable PlantStateTable::standard(int n_steps) {
  PlantStateTable t;
  t.n_steps = n_steps;
  //            PL     RCT    RCP    SGP   SGL    RP
  t.anchors = {{{100.0, 60.0, 27.0, 1.0, 100.0, 0.0}},
               {{100.0, 176.0, 27.0, 1.0, 60.0, 0.0}},
               {{20.0, 176.0, 156.0, 76.6, 100.0, 0.0}},
               {{50.0, 294.0, 157.0, 76.6, 50.0, 2.0}},
               {{50.0, 308.0, 157.0, 76.6, 50.0, 100.0}}};
  return t;
}

void PlantStateTable::validate() const {
  if (n_steps < 1) throw Error(Errc::kInvalidResolution, "n_steps must be >= 1");
  if (anchors.size() != 5) {
    throw Error(Errc::kConfig, "plant table needs exactly 5 anchor rows (S0..S4)");
  }
  for (const auto& a : anchors) a.validate();
  if (anchors[4].rp() < anchors[3].rp()) {
    throw Error(Errc::kConfig, "reactor power must not decrease from S3 to S4");
  }
}

std::vector<LabeledPoint> interpolate(const PlantStateTable& table) {
  table.validate();
  const int n = table.n_steps;
  std::vector<LabeledPoint> out;
  out.reserve((table.anchors.size() - 1) * static_cast<std::size_t>(n + 1));
  for (std::size_t i = 0; i + 1 < table.anchors.size(); ++i) {
    const auto& lo = table.anchors[i];
    const auto& hi = table.anchors[i + 1];
    for (int s = 0; s <= n; ++s) {
      LabeledPoint p;
      const double frac = static_cast<double>(s) / n;
      for (std::size_t k = 0; k < kNumParams; ++k) {
        p.obs.values[k] = s == n ? hi.values[k] : lo.values[k] + frac * (hi.values[k] - lo.values[k]);
      }
      p.segment = static_cast<int>(i);
      p.step = s;
      p.label = 2 * s <= n ? static_cast<int>(i) : static_cast<int>(i) + 1;
      out.push_back(p);
    }
  }
  return out;
}

std::vector<ControlAction> standard_control_actions() {
  auto cfg = [](std::array<bool, 4> rods, Boron b, std::array<bool, 3> feed,
                std::array<bool, 3> cond) { return ControlConfig{rods, b, feed, cond}; };
  const auto hold_low = cfg({1, 1, 0, 0}, Boron::kIncrease, {1, 0, 0}, {1, 0, 0});
  const auto power = cfg({1, 1, 1, 1}, Boron::kDecrease, {1, 1, 1}, {1, 1, 1});
  return {
      {0, hold_low},
      {1, hold_low},
      {2, cfg({0, 1, 1, 0}, Boron::kIncrease, {1, 0, 0}, {1, 0, 0})},
      {3, cfg({0, 0, 1, 1}, Boron::kIncrease, {1, 0, 0}, {1, 0, 0})},
      {4, power},
      {5, power},
  };
}

}  // namespace dtcoin::twin
