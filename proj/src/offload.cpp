#include "dtcoin/offload.hpp"

#include <algorithm>
#include <cmath>

#include "dtcoin/channel.hpp"

namespace dtcoin::offload {

void Task::validate() const {
  if (!(bits > 0.0) || !(cycles > 0.0) || !(deadline > 0.0)) {
    throw Error(Errc::kConfig, "task bits, cycles and deadline must be > 0");
  }
}

namespace {

LatencyParts split_latency(double cycles, double ratio, double f, double f_tilde) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) throw Error(Errc::kDomain, "offloading ratio must lie in [0, 1]");
  if (ratio == 0.0) return {};
  if (!(f_tilde >= 0.0) || !(f > f_tilde)) {
    throw Error(Errc::kInvalidTwinDeviation, "capacity must exceed the twin deviation");
  }
  LatencyParts p;
  p.estimated = ratio * cycles / f;
  p.gap = ratio * cycles * f_tilde / (f * (f - f_tilde));
  p.actual = ratio * cycles / (f - f_tilde);
  return p;
}

}  // namespace

LatencyParts cn_latency(const Task& task, double lambda, double f_cn, double f_tilde) {
  return split_latency(task.cycles, lambda, f_cn, f_tilde);
}

LatencyParts es_latency(const Task& task, double aleph, double f_em, double f_tilde) {
  return split_latency(task.cycles, aleph, f_em, f_tilde);
}

double Fleet::capacity(int node) const {
  if (node == 0) return es_capacity;
  if (node < 1 || node > num_cn()) throw Error(Errc::kIndexOutOfRange, "node index out of range");
  return cn_capacity[node - 1];
}

void Fleet::validate() const {
  if (!(es_capacity > 0.0)) throw Error(Errc::kConfig, "ES capacity must be > 0");
  for (double f : cn_capacity) {
    if (!(f > 0.0)) throw Error(Errc::kConfig, "CN capacities must be > 0");
  }
  if (!(dev >= 0.0 && dev < 0.5)) throw Error(Errc::kConfig, "dev must lie in [0, 0.5)");
}

double Economics::price(const Fleet& fleet, int node) const {
  return price_per_10ghz * fleet.capacity(node) / 10e9;
}

E2eBreakdown e2e_latency(const Task& task, const Plan& plan, const Fleet& fleet, std::span<const double> rates) {
  if (static_cast<int>(rates.size()) != fleet.num_cn() + 1) throw Error(Errc::kConfig, "need one rate per node");
  if (plan.node < 0 || plan.node > fleet.num_cn()) throw Error(Errc::kIndexOutOfRange, "node index out of range");
  const double lambda = plan.node == 0 ? 0.0 : plan.lambda;
  const double aleph = plan.aleph();
  E2eBreakdown e;
  if (plan.node > 0 && lambda > 0.0) {
    const double f = plan.beta * fleet.capacity(plan.node);
    e.cn = cn_latency(task, lambda, f, fleet.dev * f);
  }
  std::vector<double> ratios(rates.size(), 0.0);
  ratios[0] = aleph;
  if (plan.node > 0) ratios[plan.node] = lambda;
  e.tx = channel::tx_latency(ratios, task.bits, rates);
  e.es = es_latency(task, aleph, fleet.es_capacity, fleet.dev * fleet.es_capacity);
  e.total = e.cn.actual + e.tx + e.es.actual;
  return e;
}

double full_es_latency(const Task& task, const Fleet& fleet, std::span<const double> rates) {
  return e2e_latency(task, Plan{}, fleet, rates).total;
}

double plan_utility(const Task& task, const Plan& plan, const Fleet& fleet, std::span<const double> rates,
                    const Economics& econ) {
  const double t_em = full_es_latency(task, fleet, rates);
  const double t_e2e = e2e_latency(task, plan, fleet, rates).total;
  const double phi = plan.node == 0 ? plan.aleph() : plan.lambda;
  return econ.gain * (t_em - t_e2e) - econ.price(fleet, plan.node) * phi * task.cycles / 1e9;
}

OffloadProfile::OffloadProfile(int m, int k)
    : num_subsystems(m),
      num_cn(k),
      s(static_cast<std::size_t>(m) * (k + 1), 0),
      lambda(static_cast<std::size_t>(m) * k, 0.0),
      aleph(m, 0.0),
      beta(m, 0.0) {}

void OffloadProfile::set_plan(int m, const Plan& p) {
  for (int j = 0; j <= num_cn; ++j) decision(m, j) = 0;
  for (int k = 1; k <= num_cn; ++k) lam(m, k) = 0.0;
  decision(m, p.node) = 1;
  if (p.node > 0) lam(m, p.node) = p.lambda;
  aleph[m] = p.aleph();
  beta[m] = p.beta;
}

std::optional<Plan> OffloadProfile::plan(int m) const {
  int active = 0;
  int node = -1;
  for (int j = 0; j <= num_cn; ++j) {
    if (decision(m, j) != 0) {
      ++active;
      node = j;
    }
  }
  if (active > 1) throw Error(Errc::kConstraintViolation, "subsystem has more than one active offloading decision");
  if (active == 0) return std::nullopt;
  Plan p;
  p.node = node;
  p.lambda = node > 0 ? lam(m, node) : 0.0;
  p.beta = beta[m];
  return p;
}

double utility(int m, const OffloadProfile& profile, std::span<const Task> tasks, const Fleet& fleet,
               const std::vector<std::vector<double>>& rates, const Economics& econ) {
  const auto p = profile.plan(m);
  if (!p) return 0.0;
  return plan_utility(tasks[m], *p, fleet, rates[m], econ);
}

std::optional<std::string> check_constraints(const OffloadProfile& profile, std::span<const Task> tasks,
                                             const Fleet& fleet, const std::vector<std::vector<double>>& rates) {
  const int m_count = profile.num_subsystems;
  const int k_count = profile.num_cn;
  double beta_sum = 0.0;
  for (int m = 0; m < m_count; ++m) {
    int active = 0;
    for (int j = 0; j <= k_count; ++j) active += profile.decision(m, j) != 0;
    if (active > 1) return "single-decision: subsystem " + std::to_string(m) + " has several offloading decisions";
    int nonzero = 0;
    double lsum = 0.0;
    for (int k = 1; k <= k_count; ++k) {
      nonzero += profile.lam(m, k) > 0.0;
      lsum += profile.lam(m, k);
    }
    if (nonzero > 1) return "single-decision: subsystem " + std::to_string(m) + " splits over several CNs";
    if (active == 1 && std::abs(profile.aleph[m] + lsum - 1.0) > 1e-9) {
      return "ratio-split: aleph + sum lambda != 1 for subsystem " + std::to_string(m);
    }
    beta_sum += profile.beta[m];
    if (active == 1) {
      const auto p = profile.plan(m);
      try {
        const double t = e2e_latency(tasks[m], *p, fleet, rates[m]).total;
        // The ES fallback is always admissible.
        if (p->node > 0 && t > tasks[m].deadline * (1.0 + 1e-12)) {
          return "deadline: subsystem " + std::to_string(m) + " misses its deadline";
        }
      } catch (const Error& e) {
        return std::string("deadline: subsystem ") + std::to_string(m) + " latency undefined (" + e.what() + ")";
      }
    }
  }
  for (int k = 1; k <= k_count; ++k) {
    int users = 0;
    for (int m = 0; m < m_count; ++m) users += profile.decision(m, k) != 0;
    if (users > 1) return "exclusive-cn: CN " + std::to_string(k) + " serves several subsystems";
  }
  if (beta_sum > 1.0 + 1e-12) return "resource-share: sum of beta exceeds 1";
  return std::nullopt;
}

}  // namespace dtcoin::offload
