#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dtcoin/channel.hpp"
#include "dtcoin/common.hpp"
#include "dtcoin/offload.hpp"

namespace dtcoin {

struct TaskRange {
  double bits_lo = 0.0;
  double bits_hi = 0.0;
  double cycles_lo = 0.0;
  double cycles_hi = 0.0;
};

struct TaskCatalog {
  std::vector<TaskRange> types;  // task type f is types[f - 1]

  int num_types() const { return static_cast<int>(types.size()); }
  // Three types splitting the default size/workload ranges into thirds.
  static TaskCatalog standard();
  // Presets 1-3 (data-intensive) and 4-6 (compute-intensive), one type each.
  static TaskCatalog preset(int id);
};

struct ScenarioParams {
  int subsystems = 6;
  int coin_nodes = 5;
  double area = 200.0;
  channel::ChannelParams channel;
  double tx_power = 0.5;
  double cn_capacity_lo = 1e9;
  double cn_capacity_hi = 10e9;
  double es_capacity = 30e9;
  double dev = 0.02;
  double deadline = 0.015;
  int task_preset = 0;  // 0 = standard catalogue
  double persistence = 0.7;
  offload::Economics econ;

  void validate() const;
};

struct Scenario {
  ScenarioParams params;
  TaskCatalog catalog;
  std::vector<channel::Point> subsystem_pos;
  std::vector<channel::Point> cn_pos;
  channel::Point es_pos;
  std::vector<std::vector<double>> rates;  // [m][j], j = 0 ES, k = CN k
  offload::Fleet fleet;
  std::vector<std::vector<offload::Task>> tasks;  // [m][f - 1]
  std::vector<int> initial_requests;             // 0 = idle

  int num_subsystems() const { return params.subsystems; }
  int num_cn() const { return params.coin_nodes; }
  int num_types() const { return catalog.num_types(); }

  // Task per subsystem for a request vector; idle subsystems get type 1's task.
  std::vector<offload::Task> tasks_for(const std::vector<int>& requests) const;
};

Scenario make_scenario(const ScenarioParams& params, std::uint64_t seed);

// Each entry keeps its type with probability `persistence`, otherwise it is
// redrawn uniformly from {0, ..., F}.
std::vector<int> step_requests(const std::vector<int>& requests, int num_types, double persistence, Rng& rng);

std::uint64_t scenario_hash(const Scenario& s);
std::string hex64(std::uint64_t v);

}  // namespace dtcoin
