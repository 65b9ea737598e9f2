#include "dtcoin/scenario.hpp"

#include <bit>
#include <cstdio>
#include <random>

namespace dtcoin {

namespace {

constexpr double kBitsPerKB = 8000.0;
constexpr double kGiga = 1e9;

std::vector<TaskRange> thirds(double bits_lo, double bits_hi, double cyc_lo, double cyc_hi) {
  std::vector<TaskRange> out;
  const double db = (bits_hi - bits_lo) / 3.0;
  const double dc = (cyc_hi - cyc_lo) / 3.0;
  for (int i = 0; i < 3; ++i) {
    out.push_back({bits_lo + i * db, bits_lo + (i + 1) * db, cyc_lo + i * dc, cyc_lo + (i + 1) * dc});
  }
  return out;
}

}  // namespace

TaskCatalog TaskCatalog::standard() {
  return {thirds(1 * kBitsPerKB, 10 * kBitsPerKB, 0.001 * kGiga, 0.1 * kGiga)};
}

TaskCatalog TaskCatalog::preset(int id) {
  if (id < 1 || id > 6) throw Error(Errc::kConfig, "task preset must be in 1..6");
  const auto ranges = id <= 3 ? thirds(10 * kBitsPerKB, 20 * kBitsPerKB, 0.1 * kGiga, 0.5 * kGiga)
                              : thirds(1 * kBitsPerKB, 5 * kBitsPerKB, 1.0 * kGiga, 2.0 * kGiga);
  return {{ranges[(id - 1) % 3]}};
}

void ScenarioParams::validate() const {
  if (subsystems < 1) throw Error(Errc::kConfig, "subsystems must be >= 1");
  if (coin_nodes < 0) throw Error(Errc::kConfig, "coin_nodes must be >= 0");
  if (!(area > 0.0)) throw Error(Errc::kConfig, "area must be > 0");
  channel.validate();
  if (!(tx_power > 0.0)) throw Error(Errc::kConfig, "tx_power must be > 0");
  if (!(cn_capacity_lo > 0.0) || cn_capacity_hi < cn_capacity_lo) {
    throw Error(Errc::kConfig, "CN capacity range must be positive and ordered");
  }
  if (!(es_capacity > 0.0)) throw Error(Errc::kConfig, "es_capacity must be > 0");
  if (!(dev >= 0.0 && dev < 0.5)) throw Error(Errc::kConfig, "dev must lie in [0, 0.5)");
  if (!(deadline > 0.0)) throw Error(Errc::kConfig, "deadline must be > 0");
  if (task_preset < 0 || task_preset > 6) throw Error(Errc::kConfig, "task_preset must be in 0..6");
  if (!(persistence >= 0.0 && persistence <= 1.0)) throw Error(Errc::kConfig, "persistence must lie in [0, 1]");
  if (!(econ.gain >= 0.0) || !(econ.price_per_10ghz >= 0.0)) throw Error(Errc::kConfig, "gain and price must be >= 0");
}

std::vector<offload::Task> Scenario::tasks_for(const std::vector<int>& requests) const {
  std::vector<offload::Task> out(num_subsystems());
  for (int m = 0; m < num_subsystems(); ++m) out[m] = tasks[m][requests[m] > 0 ? requests[m] - 1 : 0];
  return out;
}

Scenario make_scenario(const ScenarioParams& params, std::uint64_t seed) {
  params.validate();
  Rng rng(seed);
  Scenario s;
  s.params = params;
  s.catalog = params.task_preset == 0 ? TaskCatalog::standard() : TaskCatalog::preset(params.task_preset);
  const int m_count = params.subsystems;
  const int k_count = params.coin_nodes;

  std::uniform_real_distribution<double> coord(0.0, params.area);
  auto draw_point = [&] {
    const double x = coord(rng);
    const double y = coord(rng);
    return channel::Point{x, y};
  };
  s.es_pos = {params.area / 2.0, params.area / 2.0};
  for (int m = 0; m < m_count; ++m) s.subsystem_pos.push_back(draw_point());
  for (int k = 0; k < k_count; ++k) s.cn_pos.push_back(draw_point());

  std::uniform_real_distribution<double> cap(params.cn_capacity_lo, params.cn_capacity_hi);
  s.fleet.es_capacity = params.es_capacity;
  s.fleet.dev = params.dev;
  for (int k = 0; k < k_count; ++k) s.fleet.cn_capacity.push_back(cap(rng));

  s.rates.assign(m_count, std::vector<double>(k_count + 1, 0.0));
  for (int j = 0; j <= k_count; ++j) {
    const auto receiver = j == 0 ? s.es_pos : s.cn_pos[j - 1];
    const auto ch = channel::draw_channel(s.subsystem_pos, receiver, params.channel, rng);
    const auto cfg = channel::TransmitConfig::strongest_first(ch, std::vector<double>(m_count, params.tx_power));
    const auto r = channel::uplink_rates(ch, cfg);
    for (int m = 0; m < m_count; ++m) s.rates[m][j] = r[m];
  }

  s.tasks.assign(m_count, {});
  for (int m = 0; m < m_count; ++m) {
    for (const auto& range : s.catalog.types) {
      std::uniform_real_distribution<double> bits(range.bits_lo, range.bits_hi);
      std::uniform_real_distribution<double> cycles(range.cycles_lo, range.cycles_hi);
      offload::Task t;
      t.bits = bits(rng);
      t.cycles = cycles(rng);
      t.deadline = params.deadline;
      s.tasks[m].push_back(t);
    }
  }

  std::uniform_int_distribution<int> type(0, s.num_types());
  for (int m = 0; m < m_count; ++m) s.initial_requests.push_back(type(rng));
  return s;
}

std::vector<int> step_requests(const std::vector<int>& requests, int num_types, double persistence, Rng& rng) {
  std::bernoulli_distribution keep(persistence);
  std::uniform_int_distribution<int> type(0, num_types);
  std::vector<int> out(requests.size());
  for (std::size_t m = 0; m < requests.size(); ++m) {
    const bool k = keep(rng);
    out[m] = k ? requests[m] : type(rng);
  }
  return out;
}

namespace {

struct Fnv {
  std::uint64_t h = 1469598103934665603ULL;
  void bytes(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffU;
      h *= 1099511628211ULL;
    }
  }
  void d(double x) { bytes(std::bit_cast<std::uint64_t>(x)); }
  void i(long long x) { bytes(static_cast<std::uint64_t>(x)); }
};

}  // namespace

std::uint64_t scenario_hash(const Scenario& s) {
  Fnv f;
  f.i(s.num_subsystems());
  f.i(s.num_cn());
  for (const auto& p : s.subsystem_pos) {
    f.d(p.x);
    f.d(p.y);
  }
  for (const auto& p : s.cn_pos) {
    f.d(p.x);
    f.d(p.y);
  }
  for (const auto& row : s.rates) {
    for (double r : row) f.d(r);
  }
  for (double c : s.fleet.cn_capacity) f.d(c);
  f.d(s.fleet.es_capacity);
  f.d(s.fleet.dev);
  for (const auto& row : s.tasks) {
    for (const auto& t : row) {
      f.d(t.bits);
      f.d(t.cycles);
      f.d(t.deadline);
    }
  }
  for (int r : s.initial_requests) f.i(r);
  return f.h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace dtcoin
