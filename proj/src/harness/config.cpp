#include "dtcoin/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace dtcoin::harness {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(Errc::kConfig, "config " + (path.empty() ? std::string("/") : path) + ": " + msg);
}

void require(bool ok, const std::string& path, const std::string& msg) {
  if (!ok) fail(path, msg);
}

// Walks one JSON object, converting known keys and rejecting unknown ones.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    require(j_.is_object(), path_, "expected an object");
  }

  std::string at(const char* key) const { return path_ + "/" + key; }
  bool has(const char* key) {
    seen_.insert(key);
    return j_.contains(key);
  }
  const json& raw(const char* key) const { return j_.at(key); }

  void num(const char* key, double& dst, double lo, double hi) {
    if (!has(key)) return;
    const auto& v = j_.at(key);
    require(v.is_number(), at(key), "expected a number");
    const double x = v.get<double>();
    require(x >= lo && x <= hi, at(key), "must be in [" + fmt(lo) + ", " + fmt(hi) + "]");
    dst = x;
  }

  template <class Int>
  void integer(const char* key, Int& dst, long long lo, long long hi) {
    if (!has(key)) return;
    const auto& v = j_.at(key);
    require(v.is_number_integer(), at(key), "expected an integer");
    const long long x = v.get<long long>();
    require(x >= lo && x <= hi, at(key), "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    dst = static_cast<Int>(x);
  }

  void str(const char* key, std::string& dst) {
    if (!has(key)) return;
    require(j_.at(key).is_string(), at(key), "expected a string");
    dst = j_.at(key).get<std::string>();
  }

  void int_list(const char* key, std::vector<int>& dst, int lo, int hi) {
    if (!has(key)) return;
    const auto& v = j_.at(key);
    require(v.is_array() && !v.empty(), at(key), "expected a non-empty array");
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string p = at(key) + "/" + std::to_string(i);
      require(v[i].is_number_integer(), p, "expected an integer");
      const long long x = v[i].get<long long>();
      require(x >= lo && x <= hi, p, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
      out.push_back(static_cast<int>(x));
    }
    dst = std::move(out);
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) fail(path_ + "/" + k, "unknown key");
    }
  }

 private:
  static std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

constexpr double kBig = 1e300;

void read_scenario(Section s, ScenarioParams& p) {
  s.integer("subsystems", p.subsystems, 4, 12);
  s.integer("coin_nodes", p.coin_nodes, 1, 10);
  s.num("area", p.area, 1e-6, 1e6);
  s.integer("task_preset", p.task_preset, 0, 6);
  s.num("persistence", p.persistence, 0.0, 1.0);
  s.num("tx_power", p.tx_power, 1e-12, 1e6);
  s.num("deadline", p.deadline, 1e-9, 1e6);
  s.num("dev", p.dev, 0.0, 0.999999);
  s.num("es_capacity", p.es_capacity, 1.0, kBig);
  s.num("cn_capacity_lo", p.cn_capacity_lo, 1.0, kBig);
  s.num("cn_capacity_hi", p.cn_capacity_hi, 1.0, kBig);
  require(p.cn_capacity_lo <= p.cn_capacity_hi, s.at("cn_capacity_hi"), "must be >= cn_capacity_lo");
  s.integer("antennas", p.channel.antennas, 1, 1024);
  s.num("noise_dbm_per_hz", p.channel.noise_dbm_per_hz, -300.0, 0.0);
  s.num("bandwidth", p.channel.bandwidth, 1.0, kBig);
  s.num("blocklength", p.channel.blocklength, 1.0, kBig);
  s.num("error_probability", p.channel.eps, 1e-300, 0.5);
  s.num("gain", p.econ.gain, 0.0, kBig);
  s.num("price_per_10ghz", p.econ.price_per_10ghz, 0.0, kBig);
  s.finish();
}

void read_twin(Section s, twin::TwinConfig& t) {
  s.integer("n_steps", t.table.n_steps, 1, 1000);
  s.num("stay", t.stay, 0.0, 1.0);
  s.num("advance", t.advance, 0.0, 1.0);
  require(std::abs(t.stay + t.advance - 1.0) <= 1e-12, s.at("advance"), "stay + advance must equal 1");
  s.integer("extension_states", t.extension_states, 1, 100);
  s.num("epsilon", t.epsilon, 0.0, 1.0);
  s.num("gamma", t.gamma, 0.0, 0.999999);
  s.integer("t_p", t.t_p, 4, 100000);
  s.num("sensor_noise", t.sensor_noise, 0.0, 0.01);
  if (s.has("kappa")) {
    const auto& v = s.raw("kappa");
    require(v.is_array() && !v.empty(), s.at("kappa"), "expected a non-empty array of [from, to, kappa]");
    std::vector<twin::KappaEntry> sched;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string p = s.at("kappa") + "/" + std::to_string(i);
      const auto& e = v[i];
      require(e.is_array() && e.size() == 3 && e[0].is_number_integer() && e[1].is_number_integer() &&
                  e[2].is_number(),
              p, "expected [from, to, kappa]");
      const int from = e[0].get<int>();
      const int to = e[1].get<int>();
      const double k = e[2].get<double>();
      require(from >= 0 && to >= from, p, "need 0 <= from <= to");
      require(k >= 0.0, p, "kappa must be >= 0");
      sched.push_back({{from, to}, k});
    }
    t.observation.kappa_schedule = std::move(sched);
  }
  s.finish();
}

void read_agent(Section s, orra::TrainConfig& c) {
  auto& a = c.agent;
  s.int_list("hidden", a.hidden, 1, 4096);
  s.num("lr", a.adam.lr, 1e-12, 10.0);
  s.num("gamma", a.gamma, 0.0, 0.999999);
  s.integer("batch", a.batch, 1, 1 << 20);
  s.integer("target_sync", a.target_sync, 1, 1 << 30);
  s.integer("replay_capacity", a.replay_capacity, 1, 1 << 30);
  s.num("eps_start", a.eps_start, 0.0, 1.0);
  s.num("eps_end", a.eps_end, 0.0, 1.0);
  s.num("anneal_fraction", a.anneal_fraction, 1e-9, 1.0);
  s.num("grad_clip", a.grad_clip, 1e-12, kBig);
  s.integer("episodes", c.episodes, 1, 1 << 24);
  s.integer("steps_per_episode", c.steps_per_episode, 1, 1 << 24);
  s.integer("validation_every", c.validation_every, 1, 1 << 24);
  s.integer("validation_episodes", c.validation_episodes, 1, 1 << 16);
  s.num("reward_scale", c.reward_scale, 1e-12, kBig);
  s.finish();
}

void read_seeds(const json& v, std::vector<std::uint64_t>& seeds) {
  const std::string path = "/seeds";
  if (v.is_object()) {
    Section s(v, path);
    long long first = 0;
    long long count = 30;
    s.integer("first", first, 0, (1LL << 62));
    s.integer("count", count, 1, 1000000);
    s.finish();
    seeds.clear();
    for (long long i = 0; i < count; ++i) seeds.push_back(static_cast<std::uint64_t>(first + i));
    return;
  }
  require(v.is_array() && !v.empty(), path, "expected a non-empty array or {first, count}");
  seeds.clear();
  for (std::size_t i = 0; i < v.size(); ++i) {
    require(v[i].is_number_unsigned(), path + "/" + std::to_string(i), "expected a non-negative integer");
    seeds.push_back(v[i].get<std::uint64_t>());
  }
}

}  // namespace

ExperimentConfig::ExperimentConfig() {
  for (std::uint64_t i = 0; i < 30; ++i) seeds.push_back(i);
}

const char* to_string(orra::Mode m) {
  switch (m) {
    case orra::Mode::kDdqn: return "ddqn";
    case orra::Mode::kRand: return "rand";
    case orra::Mode::kMec: return "mec";
  }
  return "?";
}

const char* to_string(game::Arbitration a) { return a == game::Arbitration::kRandom ? "random" : "roundrobin"; }

orra::Mode parse_mode(std::string_view s) {
  if (s == "ddqn") return orra::Mode::kDdqn;
  if (s == "rand") return orra::Mode::kRand;
  if (s == "mec") return orra::Mode::kMec;
  throw Error(Errc::kConfig, "mode must be ddqn, rand or mec");
}

game::Arbitration parse_arbitration(std::string_view s) {
  if (s == "random") return game::Arbitration::kRandom;
  if (s == "roundrobin") return game::Arbitration::kRoundRobin;
  throw Error(Errc::kConfig, "arbitration must be random or roundrobin");
}

ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::kConfig, std::string("config: ") + e.what());
  }
  ExperimentConfig c;
  Section root(j, "");
  if (root.has("scenario")) read_scenario(Section(j.at("scenario"), "/scenario"), c.scenario);
  if (root.has("seeds")) read_seeds(j.at("seeds"), c.seeds);
  if (root.has("twin")) read_twin(Section(j.at("twin"), "/twin"), c.twin);
  if (root.has("game")) {
    Section g(j.at("game"), "/game");
    std::string s;
    g.str("arbitration", s);
    if (!s.empty()) {
      try {
        c.arbitration = parse_arbitration(s);
      } catch (const Error&) {
        fail("/game/arbitration", "must be random or roundrobin");
      }
    }
    s.clear();
    g.str("mode", s);
    if (!s.empty()) {
      try {
        c.mode = parse_mode(s);
      } catch (const Error&) {
        fail("/game/mode", "must be ddqn, rand or mec");
      }
    }
    g.integer("max_iters", c.max_iters, 0, 1 << 30);
    g.finish();
  }
  if (root.has("agent")) read_agent(Section(j.at("agent"), "/agent"), c.train);
  root.integer("eval_slots", c.eval_slots, 1, 1 << 24);
  if (root.has("sweep")) {
    Section s(j.at("sweep"), "/sweep");
    s.int_list("subsystems", c.sweep.subsystems, 4, 12);
    s.int_list("coin_nodes", c.sweep.coin_nodes, 1, 10);
    s.int_list("task_type", c.sweep.task_type, 1, 6);
    s.finish();
  }
  root.str("out", c.out_dir);
  require(!c.out_dir.empty(), "/out", "must not be empty");
  root.finish();

  try {
    c.scenario.validate();
    c.twin.validate();
    c.train.validate();
  } catch (const Error& e) {
    throw Error(Errc::kConfig, std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kConfig, "config: cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_json(const ExperimentConfig& c) {
  const auto& p = c.scenario;
  const auto& a = c.train.agent;
  json kappa = json::array();
  for (const auto& e : c.twin.observation.kappa_schedule) kappa.push_back({e.pair.from, e.pair.to, e.kappa});
  json j = {
      {"scenario",
       {{"subsystems", p.subsystems},
        {"coin_nodes", p.coin_nodes},
        {"area", p.area},
        {"task_preset", p.task_preset},
        {"persistence", p.persistence},
        {"tx_power", p.tx_power},
        {"deadline", p.deadline},
        {"dev", p.dev},
        {"es_capacity", p.es_capacity},
        {"cn_capacity_lo", p.cn_capacity_lo},
        {"cn_capacity_hi", p.cn_capacity_hi},
        {"antennas", p.channel.antennas},
        {"noise_dbm_per_hz", p.channel.noise_dbm_per_hz},
        {"bandwidth", p.channel.bandwidth},
        {"blocklength", p.channel.blocklength},
        {"error_probability", p.channel.eps},
        {"gain", p.econ.gain},
        {"price_per_10ghz", p.econ.price_per_10ghz}}},
      {"seeds", c.seeds},
      {"twin",
       {{"n_steps", c.twin.table.n_steps},
        {"stay", c.twin.stay},
        {"advance", c.twin.advance},
        {"extension_states", c.twin.extension_states},
        {"epsilon", c.twin.epsilon},
        {"gamma", c.twin.gamma},
        {"t_p", c.twin.t_p},
        {"sensor_noise", c.twin.sensor_noise},
        {"kappa", kappa}}},
      {"game", {{"arbitration", to_string(c.arbitration)}, {"mode", to_string(c.mode)}, {"max_iters", c.max_iters}}},
      {"agent",
       {{"hidden", a.hidden},
        {"lr", a.adam.lr},
        {"gamma", a.gamma},
        {"batch", a.batch},
        {"target_sync", a.target_sync},
        {"replay_capacity", a.replay_capacity},
        {"eps_start", a.eps_start},
        {"eps_end", a.eps_end},
        {"anneal_fraction", a.anneal_fraction},
        {"grad_clip", a.grad_clip},
        {"episodes", c.train.episodes},
        {"steps_per_episode", c.train.steps_per_episode},
        {"validation_every", c.train.validation_every},
        {"validation_episodes", c.train.validation_episodes},
        {"reward_scale", c.train.reward_scale}}},
      {"eval_slots", c.eval_slots},
      {"sweep",
       {{"subsystems", c.sweep.subsystems}, {"coin_nodes", c.sweep.coin_nodes}, {"task_type", c.sweep.task_type}}},
      {"out", c.out_dir}};
  return j.dump(2);
}

std::uint64_t config_hash(const ExperimentConfig& c) {
  ExperimentConfig k = c;
  k.out_dir = "-";  // where results go does not change them
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_json(k)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace dtcoin::harness
