#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "dtcoin/orra/trainer.hpp"
#include "test_util.hpp"

using namespace dtcoin;
using namespace dtcoin::orra;
using dtcoin::testing::error_code;

namespace {

Transition make_transition(std::vector<double> s, std::vector<int> a, double r, std::vector<double> next,
                           bool terminal) {
  return Transition{std::move(s), std::move(a), r, std::move(next), terminal};
}

std::vector<const Transition*> pointers(const std::vector<Transition>& v) {
  std::vector<const Transition*> p;
  for (const auto& t : v) p.push_back(&t);
  return p;
}

// Central differences of f around params, one coordinate at a time.
template <class F>
std::vector<double> numeric_grad(std::vector<double>& params, F&& f, double h = 1e-6) {
  std::vector<double> g(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double keep = params[i];
    params[i] = keep + h;
    const double up = f();
    params[i] = keep - h;
    const double down = f();
    params[i] = keep;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double scale = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) scale = std::max({scale, std::abs(a[i]), std::abs(b[i])});
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  return worst;
}

AgentConfig small_agent() {
  AgentConfig c;
  c.hidden = {8};
  c.batch = 4;
  c.target_sync = 5;
  c.replay_capacity = 50;
  return c;
}

ScenarioParams two_subsystems() {
  ScenarioParams p;
  p.subsystems = 2;
  p.coin_nodes = 2;
  p.deadline = 1.0;
  return p;
}

TrainConfig quick_train() {
  TrainConfig c;
  c.agent.hidden = {16, 16};
  c.agent.batch = 8;
  c.agent.target_sync = 7;
  c.episodes = 6;
  c.steps_per_episode = 5;
  c.validation_every = 2;
  c.validation_episodes = 1;
  return c;
}

}  // namespace

TEST_CASE("mlp gradient matches finite differences") {
  Rng rng(3);
  Mlp net({1, 3, 1}, rng);
  REQUIRE(net.num_params() == 10u);
  // Keep every hidden unit active so the loss is smooth around the probe point.
  auto& w = net.params();
  for (int j = 0; j < 3; ++j) w[j] = 0.5 + 0.3 * j;
  w[3] = 0.1, w[4] = -0.2, w[5] = 0.05;
  const std::vector<double> x = {0.7};
  const double target = 0.4;
  auto loss = [&] {
    const double y = net.forward(x)[0] - target;
    return y * y;
  };

  Mlp::Cache cache;
  const double y = net.forward(x, cache)[0];
  std::vector<double> grad(net.num_params(), 0.0);
  const std::vector<double> d_out = {2.0 * (y - target)};
  net.backward(cache, d_out, grad);
  const auto fd = numeric_grad(net.params(), loss);
  CHECK(max_rel_diff(grad, fd) <= 1e-4);

  // Inactive inputs and a deeper stack.
  Mlp deep({4, 5, 5, 3}, rng);
  const std::vector<double> sparse = {0.0, 1.0, 0.0, 0.5};
  const std::vector<double> weights = {0.3, -1.2, 0.8};
  auto lin = [&] {
    const auto q = deep.forward(sparse);
    return q[0] * weights[0] + q[1] * weights[1] + q[2] * weights[2];
  };
  Mlp::Cache c2;
  deep.forward(sparse, c2);
  std::vector<double> g2(deep.num_params(), 0.0);
  deep.backward(c2, weights, g2);
  CHECK(max_rel_diff(g2, numeric_grad(deep.params(), lin)) <= 1e-4);
}

TEST_CASE("agent loss gradient matches finite differences") {
  Rng rng(5);
  AgentConfig cfg = small_agent();
  DdqnAgent agent(3, 2, 4, cfg, rng);
  const std::vector<Transition> data = {
      make_transition({1, 0, 0.5}, {1, 3}, 0.7, {0, 1, 0}, true),
      make_transition({0, 1, 0.2}, {0, 2}, -0.4, {1, 1, 0}, true),
      make_transition({0.3, 0, 1}, {2, 2}, 1.5, {0, 0, 1}, true),
  };
  const auto batch = pointers(data);
  std::vector<double> grad;
  agent.loss_and_grad(batch, grad);
  const auto fd = numeric_grad(agent.online().params(), [&] { return agent.loss(batch); });
  CHECK(max_rel_diff(grad, fd) <= 1e-4);
}

TEST_CASE("double-Q target uses a 0.9 discount") {
  Rng rng(8);
  AgentConfig cfg = small_agent();
  DdqnAgent agent(3, 2, 4, cfg, rng);
  CHECK(agent.config().gamma == 0.9);
  // Make the target network differ from the online one.
  for (auto& p : agent.target().params()) p *= 1.5;

  const auto t = make_transition({1, 0, 0}, {2, 1}, 0.25, {0, 1, 1}, false);
  const auto q_next_online = agent.q_online(t.next_state);
  const auto q_next_target = agent.q_target(t.next_state);
  double v = 0.0;
  for (int m = 0; m < 2; ++m) {
    const auto first = q_next_online.begin() + m * 4;
    const int a = static_cast<int>(std::max_element(first, first + 4) - first);
    v += q_next_target[m * 4 + a];
  }
  const double y = 0.25 + 0.9 * v / 2.0;
  const auto q = agent.q_online(t.state);
  const double expected = (std::pow(q[2] - y, 2) + std::pow(q[4 + 1] - y, 2)) / 2.0;
  const std::vector<const Transition*> batch = {&t};
  CHECK(agent.loss(batch) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("adam and gradient clipping") {
  Adam adam(2, AdamConfig{});
  std::vector<double> p = {1.0, -1.0};
  adam.step(p, {0.5, -2.0});
  // First bias-corrected step moves each coordinate by lr against the gradient sign.
  CHECK(p[0] == doctest::Approx(1.0 - 1e-3).epsilon(1e-9));
  CHECK(p[1] == doctest::Approx(-1.0 + 1e-3).epsilon(1e-9));
  CHECK(adam.t() == 1);

  std::vector<double> g = {3.0, 4.0};
  CHECK(clip_grad_norm(g, 1.0) == doctest::Approx(5.0));
  CHECK(g[0] == doctest::Approx(0.6));
  CHECK(g[1] == doctest::Approx(0.8));
  std::vector<double> small = {0.1, 0.2};
  clip_grad_norm(small, 10.0);
  CHECK(small == std::vector<double>{0.1, 0.2});
}

TEST_CASE("replay buffer") {
  ReplayBuffer buf(3);
  CHECK(buf.empty());
  for (int i = 0; i < 5; ++i) buf.push(make_transition({0}, {0}, i, {0}, true));
  CHECK(buf.size() == 3u);
  CHECK(buf.at(0).reward == 2.0);
  CHECK(buf.at(2).reward == 4.0);
  CHECK(error_code([&] { buf.at(3); }) == Errc::kIndexOutOfRange);

  Rng rng(1);
  auto idx = buf.sample(10, rng);
  CHECK(idx.size() == 3u);
  std::sort(idx.begin(), idx.end());
  CHECK(idx == std::vector<std::size_t>{0, 1, 2});

  ReplayBuffer big;
  CHECK(big.capacity() == 10000u);
  for (int i = 0; i < 10050; ++i) big.push(make_transition({0}, {0}, i, {0}, true));
  CHECK(big.size() == 10000u);
  CHECK(big.at(0).reward == 50.0);
  const auto s = big.sample(64, rng);
  CHECK(std::set<std::size_t>(s.begin(), s.end()).size() == 64u);

  CHECK(error_code([] { ReplayBuffer zero(0); }) == Errc::kConfig);
}

TEST_CASE("epsilon schedule") {
  const AgentConfig cfg;
  CHECK(epsilon_at(cfg, 0, 60) == 1.0);
  CHECK(epsilon_at(cfg, 15, 60) == doctest::Approx(0.525));
  CHECK(epsilon_at(cfg, 30, 60) == doctest::Approx(0.05));
  CHECK(epsilon_at(cfg, 59, 60) == doctest::Approx(0.05));
  for (int e = 1; e < 60; ++e) CHECK(epsilon_at(cfg, e, 60) <= epsilon_at(cfg, e - 1, 60));
}

TEST_CASE("action and state encoding") {
  CHECK(encode_action(10, 5) == 115);
  const auto d = decode_action({encode_action(10, 5), encode_action(3, 2)});
  CHECK(d.phi[0] == doctest::Approx(1.0));
  CHECK(d.beta[0] == doctest::Approx(0.5));
  CHECK(d.phi[1] == doctest::Approx(0.3));
  CHECK(d.beta[1] == doctest::Approx(0.2));

  const auto over = decode_action({encode_action(0, 10), encode_action(0, 10), encode_action(0, 5)});
  CHECK(over.beta[0] == doctest::Approx(0.4));
  CHECK(over.beta[2] == doctest::Approx(0.2));
  double sum = 0.0;
  for (double b : over.beta) sum += b;
  CHECK(sum == doctest::Approx(1.0));

  for (int a = 0; a < kGridActions; ++a) {
    const auto one = decode_action({a});
    const auto phi = static_cast<int>(std::lround(one.phi[0] * 10));
    const auto beta = static_cast<int>(std::lround(one.beta[0] * 10));
    CHECK(encode_action(phi, beta) == a);
  }
  CHECK(error_code([] { decode_action({kGridActions}); }) == Errc::kIndexOutOfRange);
  CHECK(error_code([] { encode_action(11, 0); }) == Errc::kIndexOutOfRange);

  const auto x = encode_state({0, 3, 1}, 3);
  CHECK(x == std::vector<double>{1, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0});
  CHECK(error_code([] { encode_state({4}, 3); }) == Errc::kIndexOutOfRange);
}

TEST_CASE("epsilon-greedy action selection") {
  Rng init(2);
  AgentConfig cfg = small_agent();
  DdqnAgent agent(4, 1, kGridActions, cfg, init);
  const std::vector<double> state = {1, 0, 0, 1};

  Rng rng(17);
  std::vector<int> counts(kGridActions, 0);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) ++counts[agent.act(state, 1.0, rng)[0]];
  const double expected = static_cast<double>(draws) / kGridActions;
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 99.9% quantile of chi-square with 120 degrees of freedom.
  CHECK(chi2 < 173.6);

  const auto g = agent.greedy(state);
  for (int i = 0; i < 20; ++i) CHECK(agent.act(state, 0.0, rng) == g);
  const auto q = agent.q_online(state);
  CHECK(q[g[0]] == *std::max_element(q.begin(), q.end()));

  std::fill(agent.online().params().begin(), agent.online().params().end(), 0.0);
  CHECK(agent.greedy(state)[0] == 0);
}

TEST_CASE("train step") {
  Rng init(4);
  AgentConfig cfg = small_agent();
  cfg.adam.lr = 1e-2;
  DdqnAgent agent(3, 1, 3, cfg, init);
  Rng rng(6);
  CHECK_FALSE(agent.train_step(rng).has_value());

  // Terminal transitions with a constant reward: Q(s, a) is driven to c.
  const double c = 0.8;
  agent.remember(make_transition({1, 0, 0}, {1}, c, {0, 0, 0}, true));
  agent.remember(make_transition({0, 1, 0}, {2}, c, {0, 0, 0}, true));
  const auto before_target = agent.q_target(std::vector<double>{1, 0, 0});
  double first = 0.0, last = 0.0;
  for (int step = 1; step <= 600; ++step) {
    const double l = agent.train_step(rng).value();
    if (step == 1) first = l;
    last = l;
    if (step < cfg.target_sync) CHECK(agent.q_target(std::vector<double>{1, 0, 0}) == before_target);
  }
  CHECK(last < 1e-6);
  CHECK(last < first);
  CHECK(agent.q_online(std::vector<double>{1, 0, 0})[1] == doctest::Approx(c).epsilon(1e-3));
  CHECK(agent.train_steps() == 600);

  // Target refresh happens exactly on multiples of target_sync.
  agent.remember(make_transition({0, 0, 1}, {0}, -1.0, {1, 0, 0}, false));
  const std::vector<double> probe = {0, 0, 1};
  for (int step = 1; step <= 2 * cfg.target_sync; ++step) {
    const auto tq = agent.q_target(probe);
    agent.train_step(rng);
    if (agent.train_steps() % cfg.target_sync == 0) {
      CHECK(agent.q_target(probe) == agent.q_online(probe));
    } else {
      CHECK(agent.q_target(probe) == tq);
    }
  }
}

TEST_CASE("parameters stay finite under long training") {
  Rng init(9);
  AgentConfig cfg;
  cfg.hidden = {16, 16};
  cfg.batch = 4;
  cfg.adam.lr = 1e-2;
  DdqnAgent agent(6, 2, 5, cfg, init);
  Rng rng(10);
  std::uniform_int_distribution<int> a(0, 4), s(0, 5);
  std::uniform_real_distribution<double> r(-1e3, 1e3);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> x(6, 0.0), y(6, 0.0);
    x[s(rng)] = 1.0;
    y[s(rng)] = 1.0;
    agent.remember(make_transition(x, {a(rng), a(rng)}, r(rng), y, i % 7 == 0));
  }
  bool finite = true;
  for (int step = 0; step < 100000 && finite; ++step) {
    agent.train_step(rng);
    if (step % 1000 == 999) {
      for (double p : agent.online().params()) finite = finite && std::isfinite(p);
    }
  }
  CHECK(finite);
  for (double p : agent.target().params()) CHECK(std::isfinite(p));
}

TEST_CASE("slot reward") {
  const auto s = make_scenario(two_subsystems(), 1);
  const std::vector<int> req = {1, 2};
  // Full offloading with an even resource split reproduces the reference.
  const auto full = evaluate_slot(s, req, {encode_action(10, 5), encode_action(10, 5)});
  CHECK(full.feasible);
  CHECK(full.reward == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

  int feasible = 0;
  for (int a0 = 0; a0 < kGridActions; a0 += 7) {
    for (int a1 = 0; a1 < kGridActions; a1 += 11) {
      const auto o = evaluate_slot(s, req, {a0, a1});
      if (o.feasible) {
        ++feasible;
        CHECK(o.reward == doctest::Approx(o.utility - o.reference));
      } else {
        CHECK(o.reward == doctest::Approx(-10.0 * std::abs(o.reference)));
      }
    }
  }
  CHECK(feasible > 0);

  ScenarioParams tight = two_subsystems();
  tight.deadline = 0.015;
  const auto st = make_scenario(tight, 2);
  for (int a = 0; a < kGridActions; a += 5) {
    const auto o = evaluate_slot(st, st.initial_requests, {a, a});
    CHECK(o.reward == doctest::Approx(o.feasible ? o.utility - o.reference : -10.0 * std::abs(o.reference)));
  }
}

TEST_CASE("mec baseline") {
  ScenarioParams p;
  p.subsystems = 6;
  p.coin_nodes = 4;
  p.deadline = 1.0;
  const auto s = make_scenario(p, 3);
  const std::vector<int> req = {1, 2, 3, 1, 2, 3};
  const std::vector<int> act(6, encode_action(5, 1));
  const auto mec = evaluate_slot(s, req, act, false);
  CHECK(mec.updates <= 6);
  for (int j : mec.strategies) CHECK(j == game::kEs);
  // Utility is the sum of the ES-only utilities.
  const auto tasks = s.tasks_for(req);
  double sum = 0.0;
  for (int m = 0; m < 6; ++m) {
    sum += offload::plan_utility(tasks[m], offload::Plan{0, 0.0, 0.0}, s.fleet, s.rates[m], p.econ);
  }
  CHECK(mec.utility == doctest::Approx(sum).epsilon(1e-12));
  CHECK(mec.reward == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("rand baseline") {
  const auto s = make_scenario(two_subsystems(), 4);
  const auto hash = scenario_hash(s);
  std::vector<std::vector<double>> traces;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    std::vector<double> rewards;
    evaluate_mode(s, Mode::kRand, nullptr, seed, 15, &rewards);
    CHECK(rewards.size() == 15u);
    traces.push_back(rewards);
  }
  CHECK(traces[0] != traces[1]);
  CHECK(traces[1] != traces[2]);
  CHECK(scenario_hash(s) == hash);

  std::vector<double> again;
  evaluate_mode(s, Mode::kRand, nullptr, 1, 15, &again);
  CHECK(again == traces[0]);
}

TEST_CASE("trainer checkpoint and resume") {
  const auto s = make_scenario(two_subsystems(), 5);
  const auto cfg = quick_train();
  Trainer whole(s, cfg, 11);
  whole.run();
  CHECK(whole.done());
  CHECK(whole.curve().size() == 6u);
  CHECK_FALSE(whole.losses().empty());
  for (double p : whole.agent().online().params()) CHECK(std::isfinite(p));

  Trainer first(s, cfg, 11);
  for (int e = 0; e < 3; ++e) first.run_episode();
  const auto snap = first.checkpoint();
  Trainer resumed = Trainer::resume(s, snap);
  CHECK(resumed.episode() == 3);
  resumed.run();

  REQUIRE(resumed.losses().size() == whole.losses().size());
  CHECK(resumed.losses() == whole.losses());
  CHECK(resumed.agent().online().params() == whole.agent().online().params());
  CHECK(resumed.best_validation() == whole.best_validation());
  for (std::size_t i = 0; i < whole.curve().size(); ++i) {
    CHECK(resumed.curve()[i].mean_utility == whole.curve()[i].mean_utility);
    CHECK(resumed.curve()[i].loss == whole.curve()[i].loss);
  }
  CHECK(resumed.checkpoint() == whole.checkpoint());

  Trainer other(s, cfg, 12);
  other.run();
  CHECK(other.losses() != whole.losses());

  CHECK(error_code([&] { Trainer::resume(s, "{\"nope\": 1}"); }).has_value());
}
