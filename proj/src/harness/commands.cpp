#include "dtcoin/harness/commands.hpp"

#include <cstdio>
#include <fstream>
#include <random>

#include "dtcoin/orra/trainer.hpp"

namespace dtcoin::harness {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kEvalSalt = 0xA5A5A5A55A5A5A5AULL;
constexpr std::uint64_t kRandSalt = 0x0DDC0FFEEULL;
constexpr std::int64_t kMaxEpgProfiles = 50'000'000;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Csv {
 public:
  Csv(const fs::path& path, const ExperimentConfig& cfg, const char* command, const std::vector<std::string>& cols)
      : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw Error(Errc::kConfig, "cannot write " + path.string());
    out_ << "# dtcoin version=" << kVersion << " config_hash=" << hex64(config_hash(cfg)) << " command=" << command
         << "\n";
    row(cols);
  }

  template <class... T>
  void operator()(const T&... v) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(v), first = false), ...);
    out_ << "\n";
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }

 private:
  static std::string cell(double v) { return num(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(long long v) { return std::to_string(v); }
  static std::string cell(std::uint64_t v) { return std::to_string(v); }
  static std::string cell(std::int64_t v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "1" : "0"; }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }

  std::ofstream out_;
};

void prepare(const fs::path& out) { fs::create_directories(out); }

std::uint64_t first_seed(const ExperimentConfig& cfg) {
  if (cfg.seeds.empty()) throw Error(Errc::kConfig, "config /seeds: must not be empty");
  return cfg.seeds.front();
}

std::vector<std::string> twin_columns(int states, int actions) {
  std::vector<std::string> c = {"t",          "phase",      "realised",   "argmax",
                                "entropy",    "action",     "r_control",  "r_state",
                                "r_obs",      "r_total",    "p_dynamics", "p_control_forecast",
                                "p_control_posterior", "p_no_control_posterior"};
  for (int i = 0; i < states; ++i) c.push_back("b" + std::to_string(i));
  for (int u = 0; u < actions; ++u) c.push_back("u" + std::to_string(u));
  return c;
}

void write_twin_rows(Csv& csv, const std::vector<twin::TwinRow>& rows) {
  for (const auto& r : rows) {
    std::vector<std::string> cells = {std::to_string(r.t),
                                      r.phase,
                                      std::to_string(r.realised),
                                      std::to_string(r.belief.argmax()),
                                      num(r.belief.entropy()),
                                      std::to_string(r.action),
                                      num(r.reward.control),
                                      num(r.reward.state),
                                      num(r.reward.obs),
                                      num(r.reward.total),
                                      num(r.p_dynamics),
                                      num(r.p_control_forecast),
                                      num(r.p_control_posterior),
                                      num(r.p_no_control_posterior)};
    for (double p : r.belief.probs()) cells.push_back(num(p));
    for (double p : r.control_posterior) cells.push_back(num(p));
    csv.row(cells);
  }
}

orra::OrraDecision decision_for(const ExperimentConfig& cfg, const Scenario& s, std::uint64_t seed) {
  const int m = s.num_subsystems();
  std::vector<int> action(m, orra::encode_action(orra::kGridPoints - 1, 0));
  if (cfg.mode == orra::Mode::kDdqn) {
    orra::Trainer tr(s, cfg.train, seed);
    tr.run();
    action = tr.best_agent().greedy(orra::encode_state(s.initial_requests, s.num_types()));
  } else if (cfg.mode == orra::Mode::kRand) {
    Rng rng(seed ^ kRandSalt);
    std::uniform_int_distribution<int> pick(0, orra::kGridActions - 1);
    for (auto& a : action) a = pick(rng);
  }
  return orra::decode_action(action);
}

}  // namespace

twin::TwinRun cmd_twin(const ExperimentConfig& cfg, const fs::path& out) {
  prepare(out);
  const twin::TwinModel model(cfg.twin);
  Rng rng(first_seed(cfg));
  const auto run = twin::run_twin(model, cfg.twin.t_p, rng);
  const auto cols = twin_columns(model.num_states(), model.num_actions());
  Csv cal(out / "twin_calibration.csv", cfg, "twin", cols);
  write_twin_rows(cal, run.calibration);
  Csv op(out / "twin_operation.csv", cfg, "twin", cols);
  write_twin_rows(op, run.operation);
  return run;
}

std::vector<GameRow> cmd_game(const ExperimentConfig& cfg, const fs::path& out) {
  prepare(out);
  std::ofstream moves(out / "game_moves.jsonl", std::ios::binary | std::ios::trunc);
  if (!moves) throw Error(Errc::kConfig, "cannot write " + (out / "game_moves.jsonl").string());
  Csv ne(out / "game_ne.csv", cfg, "game", {"seed", "subsystem", "request", "strategy", "utility"});
  Csv summary(out / "game_summary.csv", cfg, "game",
              {"seed", "mode", "total_utility", "updates", "slots", "converged", "nash"});

  std::vector<GameRow> rows;
  std::vector<double> totals;
  std::vector<double> updates;
  for (auto seed : cfg.seeds) {
    const Scenario s = make_scenario(cfg.scenario, seed);
    const auto d = decision_for(cfg, s, seed);
    const auto ctx = game::make_context(s, s.initial_requests, d.phi, d.beta, cfg.mode != orra::Mode::kMec);
    const auto table = game::build_table(ctx);
    Rng arb(seed);
    const auto res = game::run_game(table, cfg.arbitration, arb, cfg.max_iters);
    for (const auto& mv : res.moves) {
      moves << "{\"seed\":" << seed << ",\"iteration\":" << mv.iteration << ",\"mover\":" << mv.mover
            << ",\"from\":" << mv.from << ",\"to\":" << mv.to << ",\"du\":" << num(mv.du)
            << ",\"dphi\":" << num(mv.dphi) << "}\n";
    }
    if (!res.converged) {
      throw ConvergenceError("game for seed " + std::to_string(seed) + " stopped after " +
                                 std::to_string(res.updates) + " updates without an equilibrium",
                             static_cast<double>(res.updates));
    }
    const bool nash = game::is_nash_equilibrium(table, res.strategies);
    for (int m = 0; m < s.num_subsystems(); ++m) {
      const int j = res.strategies[m];
      ne(seed, m, ctx.requests[m], j, j == game::kInactive ? 0.0 : table.utility(m, j));
    }
    summary(seed, to_string(cfg.mode), res.total_utility, res.updates, res.slots, res.converged, nash);
    rows.push_back({seed, res.total_utility, res.updates, nash});
    totals.push_back(res.total_utility);
    updates.push_back(res.updates);
  }
  const auto st = summarize(totals);
  const auto su = summarize(updates);
  summary(std::string("mean"), to_string(cfg.mode), st.mean, su.mean, std::string(""), std::string(""),
          std::string(""));
  summary(std::string("std"), to_string(cfg.mode), st.stddev, su.stddev, std::string(""), std::string(""),
          std::string(""));
  return rows;
}

TrainSummary cmd_train(const ExperimentConfig& cfg, const fs::path& out, const std::optional<fs::path>& resume,
                       std::optional<int> max_episodes) {
  prepare(out);
  const std::uint64_t seed = first_seed(cfg);
  const Scenario s = make_scenario(cfg.scenario, seed);
  auto trainer = [&] {
    if (!resume) return orra::Trainer(s, cfg.train, seed);
    std::ifstream in(*resume, std::ios::binary);
    if (!in) throw Error(Errc::kConfig, "cannot read checkpoint " + resume->string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return orra::Trainer::resume(s, text);
  }();
  int budget = max_episodes.value_or(-1);
  while (!trainer.done() && budget != 0) {
    trainer.run_episode();
    if (budget > 0) --budget;
  }
  {
    std::ofstream ck(out / "checkpoint.json", std::ios::binary | std::ios::trunc);
    if (!ck) throw Error(Errc::kConfig, "cannot write checkpoint");
    ck << trainer.checkpoint() << "\n";
  }
  Csv curve(out / "train_curve.csv", cfg, "train", {"episode", "mean_utility", "loss", "epsilon"});
  for (const auto& r : trainer.curve()) curve(r.episode, r.mean_utility, r.loss, r.epsilon);

  TrainSummary sum;
  sum.episodes_done = trainer.episode();
  sum.best_validation = trainer.best_validation();
  const auto agent = trainer.best_agent();
  const std::uint64_t eval = seed ^ kEvalSalt;
  sum.ddqn = orra::evaluate_mode(s, orra::Mode::kDdqn, &agent, eval, cfg.eval_slots);
  sum.rand = orra::evaluate_mode(s, orra::Mode::kRand, nullptr, eval, cfg.eval_slots);
  sum.mec = orra::evaluate_mode(s, orra::Mode::kMec, nullptr, eval, cfg.eval_slots);
  Csv ev(out / "train_eval.csv", cfg, "train", {"mode", "mean_utility"});
  ev(std::string("ddqn"), sum.ddqn);
  ev(std::string("rand"), sum.rand);
  ev(std::string("mec"), sum.mec);
  return sum;
}

SweepAxis parse_axis(std::string_view s) {
  if (s == "subsystems") return SweepAxis::kSubsystems;
  if (s == "coin_nodes") return SweepAxis::kCoinNodes;
  if (s == "task_type") return SweepAxis::kTaskType;
  throw Error(Errc::kConfig, "axis must be subsystems, coin_nodes or task_type");
}

const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::kSubsystems: return "subsystems";
    case SweepAxis::kCoinNodes: return "coin_nodes";
    case SweepAxis::kTaskType: return "task_type";
  }
  return "?";
}

SweepCell run_cell(const ExperimentConfig& cfg, int value, const ScenarioParams& params) {
  parallel::CellSpec cell_spec{params, cfg.train, cfg.eval_slots};
  SweepCell cell;
  cell.value = value;
  cell.seeds = parallel::sweep_seeds(cell_spec, cfg.seeds);
  std::vector<double> d, r, m;
  for (const auto& o : cell.seeds) {
    d.push_back(o.ddqn);
    r.push_back(o.rand);
    m.push_back(o.mec);
  }
  cell.ddqn = summarize(d);
  cell.rand = summarize(r);
  cell.mec = summarize(m);
  if (d.size() >= 2) {
    cell.ddqn_vs_mec = paired_t_test(d, m);
    cell.ddqn_vs_rand = paired_t_test(d, r);
  }
  return cell;
}

std::vector<SweepCell> cmd_sweep(const ExperimentConfig& cfg, SweepAxis axis, const fs::path& out) {
  prepare(out);
  const std::string name = to_string(axis);
  const std::vector<int>& values = axis == SweepAxis::kSubsystems  ? cfg.sweep.subsystems
                                   : axis == SweepAxis::kCoinNodes ? cfg.sweep.coin_nodes
                                                                   : cfg.sweep.task_type;
  Csv per_seed(out / ("sweep_" + name + ".csv"), cfg, "sweep", {name, "seed", "ddqn", "rand", "mec"});
  Csv summary(out / ("sweep_" + name + "_summary.csv"), cfg, "sweep",
              {name, "seeds", "ddqn_mean", "ddqn_std", "rand_mean", "rand_std", "mec_mean", "mec_std",
               "ddqn_minus_mec", "t_ddqn_mec", "p_ddqn_mec", "ddqn_minus_rand", "p_ddqn_rand"});
  std::vector<SweepCell> cells;
  for (int v : values) {
    ScenarioParams p = cfg.scenario;
    if (axis == SweepAxis::kSubsystems) p.subsystems = v;
    if (axis == SweepAxis::kCoinNodes) p.coin_nodes = v;
    if (axis == SweepAxis::kTaskType) p.task_preset = v;
    auto cell = run_cell(cfg, v, p);
    for (const auto& o : cell.seeds) per_seed(v, o.seed, o.ddqn, o.rand, o.mec);
    summary(v, cell.ddqn.n, cell.ddqn.mean, cell.ddqn.stddev, cell.rand.mean, cell.rand.stddev, cell.mec.mean,
            cell.mec.stddev, cell.ddqn_vs_mec.mean_diff, cell.ddqn_vs_mec.t, cell.ddqn_vs_mec.p_greater,
            cell.ddqn_vs_rand.mean_diff, cell.ddqn_vs_rand.p_greater);
    cells.push_back(std::move(cell));
  }
  return cells;
}

game::EpgReport cmd_verify_epg(const ExperimentConfig& cfg, const fs::path& out) {
  prepare(out);
  Csv csv(out / "epg.csv", cfg, "verify-epg",
          {"seed", "profiles", "deviations", "case1", "case2", "failures", "max_rel_error"});
  game::EpgReport total;
  for (auto seed : cfg.seeds) {
    const Scenario s = make_scenario(cfg.scenario, seed);
    const auto ctx = game::default_context(s, s.initial_requests);
    const auto table = game::build_table(ctx);
    if (game::epg_profile_count(table) > kMaxEpgProfiles) {
      throw Error(Errc::kConfig, "exhaustive check too large for seed " + std::to_string(seed));
    }
    const auto r = parallel::verify_epg(ctx, table);
    csv(seed, r.profiles, r.deviations, r.case1, r.case2, r.failures, r.max_rel_error);
    total.merge(r);
  }
  return total;
}

}  // namespace dtcoin::harness
