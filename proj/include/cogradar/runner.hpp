#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "cogradar/ddpg.hpp"
#include "cogradar/dual.hpp"
#include "cogradar/env.hpp"
#include "cogradar/replay.hpp"

namespace cogradar {

/// Raised when a loss or an action turns non-finite during training.
struct NumericalDivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TrainConfig {
  std::int64_t slots = 20000;
  double noise_start = 0.2;       // fraction of T0
  double noise_end = 0.02;        // fraction of T0
  double noise_decay_share = 0.5; // of total slots
  std::size_t replay_capacity = 1'000'000;
  std::int64_t checkpoint_every = 0;  // 0: final checkpoint only
  DualVariable dual;
};

/// One slot of the trace, with the learning columns filled during training.
struct TraceRow {
  SlotReport report;
  std::optional<double> critic_loss;
  std::optional<double> actor_obj;
  std::optional<double> noise_sigma;
  std::int64_t episode = 0;
};

using RowSink = std::function<void(const TraceRow&)>;

/// Everything the primal-dual training loop mutates. Serializing it and
/// restoring it continues the run bit for bit.
class TrainingSession {
 public:
  TrainingSession() = default;
  TrainingSession(const EnvConfig& env_cfg, const DdpgConfig& agent_cfg, const ObsNormalizer& norm,
                  const TrainConfig& train_cfg, std::uint64_t seed);

  /// Act, step the environment, store, learn, update the dual.
  TraceRow step();
  bool done() const { return slot_ >= train_cfg_.slots; }
  std::int64_t slot() const { return slot_; }

  const Environment& env() const { return env_; }
  const DdpgAgent& agent() const { return agent_; }
  DdpgAgent& agent() { return agent_; }
  const DualVariable& dual() const { return dual_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  const TrainConfig& train_config() const { return train_cfg_; }
  std::uint64_t seed() const { return seed_; }

  template <class Archive>
  void serialize(Archive& ar) {
    RngStream::State agent_rng = agent_rng_.state();
    ar(seed_, train_cfg_.slots, train_cfg_.noise_start, train_cfg_.noise_end, train_cfg_.noise_decay_share,
       train_cfg_.replay_capacity, train_cfg_.checkpoint_every, env_, agent_, dual_, buffer_, agent_rng, obs_,
       slot_);
    train_cfg_.dual = dual_;
    agent_rng_.set_state(agent_rng);
  }

 private:
  std::uint64_t seed_ = 0;
  TrainConfig train_cfg_;
  Environment env_{EnvConfig{}};
  DdpgAgent agent_;
  DualVariable dual_;
  ReplayBuffer buffer_;
  RngStream agent_rng_;
  Vec obs_;
  std::int64_t slot_ = 0;
};

/// Runs `n` more slots (or until done) and feeds each row to `sink`.
void train(TrainingSession& session, std::int64_t n, const RowSink& sink);

/// Episode-level aggregates written to summary.csv.
struct EpisodeSummary {
  std::int64_t episode = 0;
  std::uint64_t seed = 0;
  std::int64_t slots = 0;
  double mean_utility = 0.0;
  double mean_reward = 0.0;
  double mean_usage = 0.0;
  double violation_fraction = 0.0;
  std::optional<double> mean_confirm_latency;  // slots
  std::optional<double> mean_tracking_cost;    // per tracked target and slot
  double mean_n_miss = 0.0;
  std::int64_t confirmations = 0;
};

class SummaryAccumulator {
 public:
  explicit SummaryAccumulator(double theta_max = 0.9) : theta_max_(theta_max) {}
  void add(const SlotReport& r);
  /// Accumulates another accumulator's raw sums (pooled means).
  void merge(const SummaryAccumulator& other);
  EpisodeSummary result(std::int64_t episode = 0, std::uint64_t seed = 0) const;

 private:
  double theta_max_;
  std::int64_t slots_ = 0;
  double utility_ = 0.0;
  double reward_ = 0.0;
  double usage_ = 0.0;
  std::int64_t violations_ = 0;
  double latency_ = 0.0;
  std::int64_t confirmations_ = 0;
  double cost_ = 0.0;
  std::int64_t cost_count_ = 0;
  double n_miss_ = 0.0;
};

/// Maps the current raw observation and active-track mask to an action.
using Policy = std::function<Vec(std::span<const double> obs, std::span<const bool> active)>;

Policy agent_policy(const DdpgAgent& agent);
Policy fixed_fraction_policy(double fraction, double t0);

/// One rollout of `slots` slots with a frozen policy. The dual variable
/// keeps updating so the reward and the lambda input match training.
EpisodeSummary run_episode(const EnvConfig& env_cfg, const Policy& policy, DualVariable dual,
                           std::int64_t slots, std::uint64_t seed, std::int64_t episode,
                           const RowSink& sink);

/// Seed of episode `k` of a run seeded with `seed`.
std::uint64_t episode_seed(std::uint64_t seed, std::int64_t k);

}  // namespace cogradar
