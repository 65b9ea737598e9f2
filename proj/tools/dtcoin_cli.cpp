#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dtcoin/harness/commands.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitConvergence = 3;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string mode;
  std::string arbitration;
  std::string axis = "coin_nodes";
  std::string resume;
  std::optional<int> episodes;
};

dtcoin::harness::ExperimentConfig resolve(const Flags& f) {
  using namespace dtcoin::harness;
  ExperimentConfig cfg = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
  if (f.seed) cfg.seeds = {*f.seed};
  if (!f.out.empty()) cfg.out_dir = f.out;
  if (!f.mode.empty()) cfg.mode = parse_mode(f.mode);
  if (!f.arbitration.empty()) cfg.arbitration = parse_arbitration(f.arbitration);
  return cfg;
}

int run(const std::string& command, const Flags& f) {
  using namespace dtcoin::harness;
  const auto cfg = resolve(f);
  const std::filesystem::path out = cfg.out_dir;
  if (command == "twin") {
    const auto run = cmd_twin(cfg, out);
    const auto& last = run.calibration.back();
    std::printf("calibration %zu steps, final argmax S%d, final control u%d; operation %zu steps\n",
                run.calibration.size(), last.belief.argmax(), last.action, run.operation.size());
  } else if (command == "game") {
    const auto rows = cmd_game(cfg, out);
    double sum = 0.0;
    for (const auto& r : rows) sum += r.total_utility;
    std::printf("%zu games (%s), mean total utility %.6g\n", rows.size(), to_string(cfg.mode),
                rows.empty() ? 0.0 : sum / rows.size());
  } else if (command == "train") {
    std::optional<std::filesystem::path> resume;
    if (!f.resume.empty()) resume = f.resume;
    const auto s = cmd_train(cfg, out, resume, f.episodes);
    std::printf("episodes %d, eval mean utility ddqn %.6g rand %.6g mec %.6g\n", s.episodes_done, s.ddqn, s.rand,
                s.mec);
  } else if (command == "sweep") {
    const auto axis = parse_axis(f.axis);
    for (const auto& c : cmd_sweep(cfg, axis, out)) {
      std::printf("%s=%d seeds=%d ddqn %.6g rand %.6g mec %.6g p(ddqn>mec) %.3g\n", to_string(axis), c.value,
                  c.ddqn.n, c.ddqn.mean, c.rand.mean, c.mec.mean, c.ddqn_vs_mec.p_greater);
    }
  } else if (command == "verify-epg") {
    const auto r = cmd_verify_epg(cfg, out);
    std::printf("profiles %lld deviations %lld failures %lld max relative error %.3g\n",
                static_cast<long long>(r.profiles), static_cast<long long>(r.deviations),
                static_cast<long long>(r.failures), r.max_rel_error);
    if (!r.ok()) return kExitFailure;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Digital-twin driven offloading simulator"};
  app.require_subcommand(1);
  Flags f;
  app.add_option("--config", f.config, "experiment config (JSON)");
  app.add_option("--seed", f.seed, "run a single seed");
  app.add_option("--out", f.out, "output directory");
  app.add_option("--mode", f.mode, "ORRA mode")->check(CLI::IsMember({"ddqn", "rand", "mec"}));
  app.add_option("--arbitration", f.arbitration, "update arbitration")
      ->check(CLI::IsMember({"random", "roundrobin"}));

  app.add_subcommand("twin", "calibration and operation trajectory")->fallthrough();
  app.add_subcommand("game", "best-response game per seed")->fallthrough();
  auto* train = app.add_subcommand("train", "train the ORRA agent")->fallthrough();
  train->add_option("--resume", f.resume, "checkpoint to continue from");
  train->add_option("--episodes", f.episodes, "stop after this many more episodes")->check(CLI::PositiveNumber);
  auto* sweep = app.add_subcommand("sweep", "compare DDQN, Rand and MEC along one axis")->fallthrough();
  sweep->add_option("--axis", f.axis, "swept parameter")
      ->check(CLI::IsMember({"subsystems", "coin_nodes", "task_type"}));
  app.add_subcommand("verify-epg", "exhaustive potential-identity check")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    return run(app.get_subcommands().front()->get_name(), f);
  } catch (const dtcoin::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const dtcoin::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == dtcoin::Errc::kConfig ? kExitConfig : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
