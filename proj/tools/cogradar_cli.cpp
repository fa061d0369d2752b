#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "cogradar/checkpoint.hpp"
#include "cogradar/config.hpp"
#include "cogradar/runner.hpp"
#include "cogradar/trace_csv.hpp"

namespace fs = std::filesystem;
using namespace cogradar;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kBadConfig = 2, kBadCheckpoint = 3, kDiverged = 4 };

struct CommonArgs {
  std::string config;
  std::string out = "out";
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> slots;
  std::optional<std::int64_t> episodes;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--config", a.config, "INI config file (defaults are used when omitted)");
  cmd->add_option("--out", a.out, "output directory")->capture_default_str();
  cmd->add_option("--set", a.sets, "override, section.key=value (repeatable)");
  cmd->add_option("--seed", a.seed, "run seed");
  cmd->add_option("--slots", a.slots, "number of slots (training) or slots per episode");
}

RunConfig resolve(const CommonArgs& a, bool training) {
  RunConfig cfg = a.config.empty() ? RunConfig{} : load_config(a.config);
  for (const auto& s : a.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(s + ": expected section.key=value");
    apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  if (a.seed) cfg.seed = *a.seed;
  if (a.slots) {
    if (*a.slots < 0) throw ConfigError("--slots: must be >= 0");
    (training ? cfg.train.slots : cfg.eval_slots) = *a.slots;
  }
  if (a.episodes) {
    if (*a.episodes < 1) throw ConfigError("--episodes: must be >= 1");
    cfg.episodes = *a.episodes;
  }
  validate(cfg);
  return cfg;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error(p.string() + ": cannot write");
  os << text;
}

std::ofstream open_csv(const fs::path& p, bool append = false) {
  std::ofstream os(p, std::ios::binary | (append ? std::ios::app : std::ios::trunc));
  if (!os) throw std::runtime_error(p.string() + ": cannot write");
  return os;
}

int cmd_train(const CommonArgs& a, const std::string& resume, std::optional<std::int64_t> stop_at) {
  const fs::path out(a.out);
  fs::create_directories(out);

  TrainingSession session;
  std::string config_text;
  if (!resume.empty()) {
    LoadedCheckpoint ck = load_checkpoint(resume);
    session = std::move(ck.session);
    config_text = std::move(ck.config_text);
  } else {
    const RunConfig cfg = resolve(a, true);
    config_text = config_to_string(cfg);
    session = TrainingSession(cfg.env_config(), cfg.ddpg_config(), cfg.normalizer(), cfg.train_config(), cfg.seed);
  }
  const fs::path resolved = out / "config.resolved";
  if (resume.empty() || !fs::exists(resolved)) write_text(resolved, config_text);

  const fs::path trace_path = out / "trace.csv";
  const bool append = !resume.empty() && fs::exists(trace_path) && fs::file_size(trace_path) > 0;
  std::ofstream trace = open_csv(trace_path, append);
  const std::size_t n = session.env().action_dim();
  TraceWriter writer(trace, n, TraceKind::kTraining, !append);

  SummaryAccumulator acc(session.env().config().theta_max);
  const std::int64_t every = session.train_config().checkpoint_every;
  const fs::path ck_path = out / "checkpoint.bin";
  while (!session.done() && !(stop_at && session.slot() >= *stop_at)) {
    const TraceRow row = session.step();
    writer.write(row);
    acc.add(row.report);
    if (every > 0 && session.slot() % every == 0) save_checkpoint(ck_path.string(), session, config_text);
    if (session.slot() % 5000 == 0)
      std::cerr << "slot " << session.slot() << "/" << session.train_config().slots << " lambda "
                << session.dual().lambda << '\n';
  }
  trace.flush();
  save_checkpoint(ck_path.string(), session, config_text);

  std::ofstream summary = open_csv(out / "summary.csv");
  write_summary(summary, {acc.result(0, session.seed())}, std::nullopt);
  return kOk;
}

int run_rollouts(const CommonArgs& a, const RunConfig& cfg, const Policy& policy) {
  const fs::path out(a.out);
  fs::create_directories(out);
  write_text(out / "config.resolved", config_to_string(cfg));

  std::ofstream trace = open_csv(out / "trace.csv");
  const EnvConfig env_cfg = cfg.env_config();
  TraceWriter writer(trace, env_cfg.n_targets(), TraceKind::kRollout);
  SummaryAccumulator pooled(env_cfg.theta_max);
  std::vector<EpisodeSummary> episodes;
  for (std::int64_t k = 0; k < cfg.episodes; ++k) {
    SummaryAccumulator acc(env_cfg.theta_max);
    const std::uint64_t seed = episode_seed(cfg.seed, k);
    run_episode(env_cfg, policy, cfg.train_config().dual, cfg.eval_slots, seed, k, [&](const TraceRow& row) {
      writer.write(row);
      acc.add(row.report);
    });
    episodes.push_back(acc.result(k, seed));
    pooled.merge(acc);
  }
  std::ofstream summary = open_csv(out / "summary.csv");
  write_summary(summary, episodes, pooled.result(-1, cfg.seed));

  const EpisodeSummary all = pooled.result();
  std::cout << "mean_utility " << format_value(all.mean_utility) << "\nmean_usage " << format_value(all.mean_usage)
            << "\nviolation_fraction " << format_value(all.violation_fraction) << "\nmean_tracking_cost "
            << format_value(all.mean_tracking_cost) << "\nmean_confirm_latency "
            << format_value(all.mean_confirm_latency) << '\n';
  return kOk;
}

int cmd_eval(const CommonArgs& a, const std::string& checkpoint) {
  const RunConfig cfg = resolve(a, false);
  LoadedCheckpoint ck = load_checkpoint(checkpoint);
  check_compatible(ck.session.agent(), cfg.ddpg_config());
  return run_rollouts(a, cfg, agent_policy(ck.session.agent()));
}

int cmd_baseline(const CommonArgs& a, std::optional<double> fraction) {
  RunConfig cfg = resolve(a, false);
  if (fraction) {
    if (!(*fraction >= 0.0 && *fraction <= 1.0)) throw ConfigError("--fraction: must lie in [0, 1]");
    cfg.fraction = *fraction;
  }
  return run_rollouts(a, cfg, fixed_fraction_policy(cfg.fraction, cfg.env.revisit_interval()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cognitive radar time-budget allocation: training, evaluation and fixed baselines"};
  app.require_subcommand(1);

  CommonArgs train_args, eval_args, base_args;
  std::string resume, checkpoint;
  std::optional<double> fraction;

  auto* train = app.add_subcommand("train", "train the constrained actor-critic policy");
  add_common(train, train_args);
  train->add_option("--resume", resume, "continue from a checkpoint");
  std::optional<std::int64_t> stop_at;
  train->add_option("--stop-at", stop_at, "checkpoint and exit once this slot is reached");

  auto* eval = app.add_subcommand("eval", "roll out a trained policy without exploration");
  add_common(eval, eval_args);
  eval->add_option("--checkpoint", checkpoint, "checkpoint written by train")->required();
  eval->add_option("--episodes", eval_args.episodes, "number of episodes");

  auto* base = app.add_subcommand("baseline", "roll out the fixed-fraction allocation");
  add_common(base, base_args);
  base->add_option("--fraction", fraction, "tracking share of each slot, in [0, 1]");
  base->add_option("--episodes", base_args.episodes, "number of episodes");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return cmd_train(train_args, resume, stop_at);
    if (eval->parsed()) return cmd_eval(eval_args, checkpoint);
    if (base->parsed()) return cmd_baseline(base_args, fraction);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kBadConfig;
  } catch (const CheckpointError& e) {
    std::cerr << "checkpoint error: " << e.what() << '\n';
    return kBadCheckpoint;
  } catch (const NumericalDivergenceError& e) {
    std::cerr << "training diverged: " << e.what() << '\n';
    return kDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
