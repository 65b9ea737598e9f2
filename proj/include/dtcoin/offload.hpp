#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dtcoin/common.hpp"

namespace dtcoin::offload {

struct Task {
  double bits = 0.0;
  double cycles = 0.0;
  double deadline = 0.015;

  double eta() const { return cycles / bits; }
  void validate() const;
};

struct LatencyParts {
  double estimated = 0.0;
  double gap = 0.0;
  double actual = 0.0;
};

// ratio * C / f, the twin-deviation gap ratio * C * f~ / (f (f - f~)), and their sum.
LatencyParts cn_latency(const Task& task, double lambda, double f_cn, double f_tilde);
LatencyParts es_latency(const Task& task, double aleph, double f_em, double f_tilde);

struct Fleet {
  std::vector<double> cn_capacity;  // Hz, per CN (1-based CN k is index k-1)
  double es_capacity = 30e9;
  double dev = 0.02;                 // twin estimate deviation f~ = dev * f

  int num_cn() const { return static_cast<int>(cn_capacity.size()); }
  double capacity(int node) const;   // node 0 = ES, k = CN k
  void validate() const;
};

struct Economics {
  double gain = 2.5;            // per second of latency reduction
  double price_per_10ghz = 0.1;  // per gigacycle, per 10 GHz of node capacity

  double price(const Fleet& fleet, int node) const;
};

// One subsystem's decision: node 0 = ES only, k = CN k with ratio lambda on
// the CN and 1 - lambda on the ES; beta is the CN resource fraction.
struct Plan {
  int node = 0;
  double lambda = 0.0;
  double beta = 0.0;

  double aleph() const { return node == 0 ? 1.0 : 1.0 - lambda; }
};

struct E2eBreakdown {
  LatencyParts cn;
  double tx = 0.0;
  LatencyParts es;
  double total = 0.0;
};

// rates[j]: uplink rate towards node j (0 = ES).
E2eBreakdown e2e_latency(const Task& task, const Plan& plan, const Fleet& fleet, std::span<const double> rates);
double full_es_latency(const Task& task, const Fleet& fleet, std::span<const double> rates);

// g (T_em - T_e2e) - p_j Phi_j C with C in gigacycles.
double plan_utility(const Task& task, const Plan& plan, const Fleet& fleet, std::span<const double> rates,
                    const Economics& econ);

// Full system profile in decision-matrix form.
struct OffloadProfile {
  int num_subsystems = 0;
  int num_cn = 0;
  std::vector<int> s;          // [m * (K + 1) + j], j = 0 ES, j = k CN k
  std::vector<double> lambda;  // [m * K + (k - 1)]
  std::vector<double> aleph;   // [m]
  std::vector<double> beta;    // [m]

  OffloadProfile(int m, int k);
  int& decision(int m, int j) { return s[static_cast<std::size_t>(m) * (num_cn + 1) + j]; }
  int decision(int m, int j) const { return s[static_cast<std::size_t>(m) * (num_cn + 1) + j]; }
  double& lam(int m, int k) { return lambda[static_cast<std::size_t>(m) * num_cn + (k - 1)]; }
  double lam(int m, int k) const { return lambda[static_cast<std::size_t>(m) * num_cn + (k - 1)]; }

  void set_plan(int m, const Plan& plan);
  // Throws kConstraintViolation when more than one decision is active.
  std::optional<Plan> plan(int m) const;
};

// Utility of subsystem m; 0 when m takes no decision.
double utility(int m, const OffloadProfile& profile, std::span<const Task> tasks, const Fleet& fleet,
               const std::vector<std::vector<double>>& rates, const Economics& econ);

// First violated constraint, if any: single decision, ratio split, deadline
// (CN plans), exclusive CN use, resource share.
std::optional<std::string> check_constraints(const OffloadProfile& profile, std::span<const Task> tasks,
                                             const Fleet& fleet, const std::vector<std::vector<double>>& rates);

}  // namespace dtcoin::offload
