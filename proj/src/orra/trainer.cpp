#include "dtcoin/orra/trainer.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "json.hpp"

namespace dtcoin::orra {

using nlohmann::json;

void TrainConfig::validate() const {
  agent.validate();
  if (episodes < 1 || steps_per_episode < 1) throw Error(Errc::kConfig, "episodes and steps_per_episode must be >= 1");
  if (validation_every < 1 || validation_episodes < 1) {
    throw Error(Errc::kConfig, "validation_every and validation_episodes must be >= 1");
  }
  if (!(reward_scale > 0.0)) throw Error(Errc::kConfig, "reward_scale must be > 0");
}

namespace {

constexpr std::uint64_t kMix = 0x9E3779B97F4A7C15ULL;

std::uint64_t episode_seed(std::uint64_t seed, int episode) {
  return seed * kMix + 1 + static_cast<std::uint64_t>(episode);
}
std::uint64_t validation_seed(std::uint64_t seed, int i) { return (seed ^ 0x5DEECE66DULL) * kMix + 7 + i; }

TrainConfig checked(TrainConfig c) {
  c.validate();
  return c;
}

std::string rng_state(const Rng& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

void set_rng_state(Rng& r, const std::string& s) {
  std::istringstream is(s);
  is >> r;
  if (!is) throw Error(Errc::kConfig, "checkpoint: bad random-generator state");
}

json agent_config_json(const AgentConfig& a) {
  return {{"hidden", a.hidden},
          {"lr", a.adam.lr},
          {"adam_beta1", a.adam.beta1},
          {"adam_beta2", a.adam.beta2},
          {"adam_eps", a.adam.eps},
          {"gamma", a.gamma},
          {"batch", a.batch},
          {"target_sync", a.target_sync},
          {"replay_capacity", a.replay_capacity},
          {"eps_start", a.eps_start},
          {"eps_end", a.eps_end},
          {"anneal_fraction", a.anneal_fraction},
          {"grad_clip", a.grad_clip}};
}

AgentConfig agent_config_from(const json& j) {
  AgentConfig a;
  a.hidden = j.at("hidden").get<std::vector<int>>();
  a.adam.lr = j.at("lr");
  a.adam.beta1 = j.at("adam_beta1");
  a.adam.beta2 = j.at("adam_beta2");
  a.adam.eps = j.at("adam_eps");
  a.gamma = j.at("gamma");
  a.batch = j.at("batch");
  a.target_sync = j.at("target_sync");
  a.replay_capacity = j.at("replay_capacity");
  a.eps_start = j.at("eps_start");
  a.eps_end = j.at("eps_end");
  a.anneal_fraction = j.at("anneal_fraction");
  a.grad_clip = j.at("grad_clip");
  return a;
}

}  // namespace

Trainer::Trainer(const Scenario& s, TrainConfig cfg, std::uint64_t seed)
    : scenario_(&s),
      cfg_(checked(std::move(cfg))),
      seed_(seed),
      rng_(seed),
      agent_(s.num_subsystems() * (s.num_types() + 1), s.num_subsystems(), kGridActions, cfg_.agent, rng_),
      env_(s, seed),
      best_score_(-std::numeric_limits<double>::infinity()) {}

CurveRow Trainer::run_episode() {
  if (done()) throw Error(Errc::kConfig, "training already finished");
  const double eps = epsilon_at(cfg_.agent, episode_, cfg_.episodes);
  env_.reset(episode_seed(seed_, episode_));
  double util = 0.0;
  double loss = 0.0;
  int loss_count = 0;
  for (int t = 0; t < cfg_.steps_per_episode; ++t) {
    Transition tr;
    tr.state = env_.state();
    tr.action = agent_.act(tr.state, eps, rng_);
    const auto out = env_.step(tr.action);
    tr.reward = cfg_.reward_scale * out.reward;
    tr.next_state = env_.state();
    util += out.utility;
    agent_.remember(std::move(tr));
    if (const auto l = agent_.train_step(rng_)) {
      loss += *l;
      ++loss_count;
      losses_.push_back(*l);
    }
  }
  CurveRow row{episode_, util / cfg_.steps_per_episode, loss_count ? loss / loss_count : 0.0, eps};
  curve_.push_back(row);
  ++episode_;
  if (episode_ % cfg_.validation_every == 0 || done()) {
    const double score = validate_greedy();
    if (score > best_score_) {
      best_score_ = score;
      best_params_ = agent_.online().params();
    }
  }
  return row;
}

void Trainer::run() {
  while (!done()) run_episode();
}

double Trainer::validate_greedy() const {
  double s = 0.0;
  for (int i = 0; i < cfg_.validation_episodes; ++i) {
    s += evaluate_mode(*scenario_, Mode::kDdqn, &agent_, validation_seed(seed_, i), cfg_.steps_per_episode);
  }
  return s / cfg_.validation_episodes;
}

DdqnAgent Trainer::best_agent() const {
  DdqnAgent a = agent_;
  if (!best_params_.empty()) a.online().params() = best_params_;
  return a;
}

std::string Trainer::checkpoint() const {
  json j;
  j["format"] = "dtcoin-orra-checkpoint";
  j["version"] = kVersion;
  j["seed"] = seed_;
  j["scenario_hash"] = hex64(scenario_hash(*scenario_));
  j["config"] = {{"agent", agent_config_json(cfg_.agent)},
                 {"episodes", cfg_.episodes},
                 {"steps_per_episode", cfg_.steps_per_episode},
                 {"validation_every", cfg_.validation_every},
                 {"validation_episodes", cfg_.validation_episodes},
                 {"reward_scale", cfg_.reward_scale}};
  j["episode"] = episode_;
  j["rng"] = rng_state(rng_);
  j["env_rng"] = rng_state(env_.rng());
  j["env_requests"] = env_.requests();
  j["online"] = agent_.online().params();
  j["target"] = agent_.target().params();
  j["adam"] = {{"t", agent_.optimizer().t()}, {"m", agent_.optimizer().m()}, {"v", agent_.optimizer().v()}};
  j["train_steps"] = agent_.train_steps();
  json replay = json::array();
  for (std::size_t i = 0; i < agent_.replay().size(); ++i) {
    const auto& t = agent_.replay().at(i);
    replay.push_back({{"s", t.state}, {"a", t.action}, {"r", t.reward}, {"s2", t.next_state}, {"done", t.terminal}});
  }
  j["replay"] = std::move(replay);
  json curve = json::array();
  for (const auto& r : curve_) curve.push_back({r.episode, r.mean_utility, r.loss, r.epsilon});
  j["curve"] = std::move(curve);
  j["losses"] = losses_;
  j["best_params"] = best_params_;
  j["best_score"] = std::isfinite(best_score_) ? json(best_score_) : json(nullptr);
  return j.dump();
}

Trainer Trainer::resume(const Scenario& s, const std::string& checkpoint_json) {
  json j;
  try {
    j = json::parse(checkpoint_json);
  } catch (const json::exception& e) {
    throw Error(Errc::kConfig, std::string("checkpoint: ") + e.what());
  }
  try {
    if (j.at("format") != "dtcoin-orra-checkpoint") throw Error(Errc::kConfig, "checkpoint: unknown format");
    if (j.at("scenario_hash") != hex64(scenario_hash(s))) {
      throw Error(Errc::kConfig, "checkpoint: scenario does not match");
    }
    const auto& c = j.at("config");
    TrainConfig cfg;
    cfg.agent = agent_config_from(c.at("agent"));
    cfg.episodes = c.at("episodes");
    cfg.steps_per_episode = c.at("steps_per_episode");
    cfg.validation_every = c.at("validation_every");
    cfg.validation_episodes = c.at("validation_episodes");
    cfg.reward_scale = c.at("reward_scale");
    Trainer tr(s, cfg, j.at("seed").get<std::uint64_t>());
    tr.episode_ = j.at("episode");
    set_rng_state(tr.rng_, j.at("rng"));
    set_rng_state(tr.env_.rng(), j.at("env_rng"));
    tr.env_.set_requests(j.at("env_requests").get<std::vector<int>>());
    auto& agent = tr.agent_;
    const auto online = j.at("online").get<std::vector<double>>();
    const auto target = j.at("target").get<std::vector<double>>();
    if (online.size() != agent.online().num_params() || target.size() != agent.target().num_params()) {
      throw Error(Errc::kConfig, "checkpoint: parameter count mismatch");
    }
    agent.online().params() = online;
    agent.target().params() = target;
    agent.optimizer().m() = j.at("adam").at("m").get<std::vector<double>>();
    agent.optimizer().v() = j.at("adam").at("v").get<std::vector<double>>();
    agent.optimizer().set_t(j.at("adam").at("t"));
    agent.set_train_steps(j.at("train_steps"));
    for (const auto& t : j.at("replay")) {
      agent.remember({t.at("s").get<std::vector<double>>(), t.at("a").get<std::vector<int>>(), t.at("r").get<double>(),
                      t.at("s2").get<std::vector<double>>(), t.at("done").get<bool>()});
    }
    for (const auto& r : j.at("curve")) {
      tr.curve_.push_back({r[0].get<int>(), r[1].get<double>(), r[2].get<double>(), r[3].get<double>()});
    }
    tr.losses_ = j.at("losses").get<std::vector<double>>();
    tr.best_params_ = j.at("best_params").get<std::vector<double>>();
    if (!j.at("best_score").is_null()) tr.best_score_ = j.at("best_score");
    return tr;
  } catch (const json::exception& e) {
    throw Error(Errc::kConfig, std::string("checkpoint: ") + e.what());
  }
}

double evaluate_mode(const Scenario& s, Mode mode, const DdqnAgent* agent, std::uint64_t seed, int slots,
                     std::vector<double>* rewards) {
  if (mode == Mode::kDdqn && agent == nullptr) throw Error(Errc::kConfig, "DDQN evaluation needs an agent");
  OrraEnv env(s, seed);
  Rng action_rng(seed * kMix + 0x1234567ULL);
  std::uniform_int_distribution<int> pick(0, kGridActions - 1);
  const int m = s.num_subsystems();
  double total = 0.0;
  for (int t = 0; t < slots; ++t) {
    std::vector<int> action(m, encode_action(kGridPoints - 1, 0));
    if (mode == Mode::kDdqn) {
      action = agent->greedy(env.state());
    } else if (mode == Mode::kRand) {
      for (auto& a : action) a = pick(action_rng);
    }
    const auto out = env.step(action, mode != Mode::kMec);
    total += out.utility;
    if (rewards) rewards->push_back(out.reward);
  }
  return total / slots;
}

}  // namespace dtcoin::orra
