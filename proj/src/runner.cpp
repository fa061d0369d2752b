#include "cogradar/runner.hpp"

#include <cmath>
#include <memory>
#include <sstream>

namespace cogradar {

namespace {

constexpr std::uint64_t kAgentInitStream = 0x100000001ULL;
constexpr std::uint64_t kAgentStream = 0x100000002ULL;

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

std::uint64_t episode_seed(std::uint64_t seed, std::int64_t k) {
  return derive_seed(seed, static_cast<std::uint64_t>(k));
}

TrainingSession::TrainingSession(const EnvConfig& env_cfg, const DdpgConfig& agent_cfg, const ObsNormalizer& norm,
                                 const TrainConfig& train_cfg, std::uint64_t seed)
    : seed_(seed),
      train_cfg_(train_cfg),
      env_(env_cfg),
      dual_(train_cfg.dual),
      buffer_(train_cfg.replay_capacity),
      agent_rng_(derive_seed(seed, kAgentStream)) {
  if (agent_cfg.state_dim != env_.observation_dim() || agent_cfg.action_dim != env_.action_dim()) {
    throw DimensionError("TrainingSession: agent shape does not match the environment");
  }
  RngStream init_rng(derive_seed(seed, kAgentInitStream));
  agent_ = DdpgAgent(agent_cfg, norm, init_rng);
  obs_ = env_.reset(episode_seed(seed, 0)).to_vector();
  obs_.back() = dual_.lambda;
}

TraceRow TrainingSession::step() {
  const double t0 = env_.config().revisit_interval();
  const auto decay = static_cast<std::int64_t>(std::llround(train_cfg_.noise_decay_share *
                                                            static_cast<double>(train_cfg_.slots)));
  TraceRow row;
  const double sigma = noise_sigma(train_cfg_.noise_start * t0, train_cfg_.noise_end * t0, slot_, decay);
  row.noise_sigma = sigma;

  Vec action = agent_.act(obs_, sigma, agent_rng_);
  if (!all_finite(action)) {
    std::ostringstream msg;
    msg << "non-finite action at slot " << slot_ << " (lambda " << dual_.lambda << ")";
    throw NumericalDivergenceError(msg.str());
  }

  StepResult res = env_.step(action, dual_.lambda);
  dual_ = dual_update(dual_, res.report.usage);

  Vec next = res.observation.to_vector();
  next.back() = dual_.lambda;
  Vec applied(action.size(), 0.0);
  for (std::size_t i = 0; i < applied.size(); ++i)
    if (res.report.dwells[i]) applied[i] = *res.report.dwells[i];
  buffer_.push(Transition{obs_, std::move(applied), res.report.reward, next});
  agent_.normalizer().observe(next);

  if (auto stats = agent_.update(buffer_, agent_rng_)) {
    if (!std::isfinite(stats->critic_loss) || !std::isfinite(stats->actor_objective)) {
      std::ostringstream msg;
      msg << "non-finite loss at slot " << slot_ << ": critic_loss=" << stats->critic_loss
          << " actor_obj=" << stats->actor_objective << " lambda=" << dual_.lambda
          << " reward=" << res.report.reward << " usage=" << res.report.usage
          << " cost_scale=" << agent_.normalizer().cost_scale;
      throw NumericalDivergenceError(msg.str());
    }
    row.critic_loss = stats->critic_loss;
    row.actor_obj = stats->actor_objective;
  }

  obs_ = std::move(next);
  ++slot_;
  row.report = std::move(res.report);
  return row;
}

void train(TrainingSession& session, std::int64_t n, const RowSink& sink) {
  for (std::int64_t i = 0; i < n && !session.done(); ++i) {
    TraceRow row = session.step();
    if (sink) sink(row);
  }
}

void SummaryAccumulator::add(const SlotReport& r) {
  ++slots_;
  utility_ += r.utility;
  reward_ += r.reward;
  usage_ += r.usage;
  if (r.usage > theta_max_) ++violations_;
  for (auto l : r.confirm_latencies) {
    latency_ += static_cast<double>(l);
    ++confirmations_;
  }
  for (const auto& c : r.costs) {
    if (c) {
      cost_ += *c;
      ++cost_count_;
    }
  }
  n_miss_ += static_cast<double>(r.n_miss);
}

void SummaryAccumulator::merge(const SummaryAccumulator& o) {
  slots_ += o.slots_;
  utility_ += o.utility_;
  reward_ += o.reward_;
  usage_ += o.usage_;
  violations_ += o.violations_;
  latency_ += o.latency_;
  confirmations_ += o.confirmations_;
  cost_ += o.cost_;
  cost_count_ += o.cost_count_;
  n_miss_ += o.n_miss_;
}

EpisodeSummary SummaryAccumulator::result(std::int64_t episode, std::uint64_t seed) const {
  EpisodeSummary s;
  s.episode = episode;
  s.seed = seed;
  s.slots = slots_;
  s.confirmations = confirmations_;
  if (slots_ == 0) return s;
  const double n = static_cast<double>(slots_);
  s.mean_utility = utility_ / n;
  s.mean_reward = reward_ / n;
  s.mean_usage = usage_ / n;
  s.violation_fraction = static_cast<double>(violations_) / n;
  s.mean_n_miss = n_miss_ / n;
  if (confirmations_ > 0) s.mean_confirm_latency = latency_ / static_cast<double>(confirmations_);
  if (cost_count_ > 0) s.mean_tracking_cost = cost_ / static_cast<double>(cost_count_);
  return s;
}

Policy agent_policy(const DdpgAgent& agent) {
  return [&agent](std::span<const double> obs, std::span<const bool>) { return agent.act(obs); };
}

Policy fixed_fraction_policy(double fraction, double t0) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw std::invalid_argument("fixed fraction must lie in [0, 1]");
  return [fraction, t0](std::span<const double>, std::span<const bool> active) {
    return fixed_policy(fraction, active, t0);
  };
}

EpisodeSummary run_episode(const EnvConfig& env_cfg, const Policy& policy, DualVariable dual, std::int64_t slots,
                           std::uint64_t seed, std::int64_t episode, const RowSink& sink) {
  Environment env(env_cfg);
  Vec obs = env.reset(seed).to_vector();
  obs.back() = dual.lambda;
  SummaryAccumulator acc(env_cfg.theta_max);
  for (std::int64_t t = 0; t < slots; ++t) {
    const std::vector<bool> mask = env.active_mask();
    const std::unique_ptr<bool[]> active(new bool[mask.size()]);
    for (std::size_t i = 0; i < mask.size(); ++i) active[i] = mask[i];
    const Vec action = policy(obs, std::span<const bool>(active.get(), mask.size()));
    StepResult res = env.step(action, dual.lambda);
    dual = dual_update(dual, res.report.usage);
    obs = res.observation.to_vector();
    obs.back() = dual.lambda;
    acc.add(res.report);
    if (sink) {
      TraceRow row;
      row.report = std::move(res.report);
      row.episode = episode;
      sink(row);
    }
  }
  return acc.result(episode, seed);
}

}  // namespace cogradar
