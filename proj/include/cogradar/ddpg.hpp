#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cogradar/adam.hpp"
#include "cogradar/mlp.hpp"
#include "cogradar/numerics.hpp"
#include "cogradar/replay.hpp"

namespace cogradar {

/// Maps raw radar observations [costs, dwells, lambda] to network inputs:
/// costs over a running scale, dwells over T0, lambda over lambda0, each
/// clipped to [-clip, clip]. With `enabled == false` it is the identity.
struct ObsNormalizer {
  bool enabled = true;
  std::size_t n = 5;
  double t0 = 2.5;
  double lambda0 = 5000.0;
  double cost_scale = 100.0;
  double cost_scale_rate = 1e-3;
  double clip = 10.0;

  Vec normalize(std::span<const double> raw) const;
  /// Moves the cost scale toward the mean of the active costs in `raw`.
  void observe(std::span<const double> raw);

  template <class Archive>
  void serialize(Archive& ar) {
    ar(enabled, n, t0, lambda0, cost_scale, cost_scale_rate, clip);
  }
};

enum class NoiseKind { kGaussian, kOrnsteinUhlenbeck };

struct DdpgConfig {
  std::size_t state_dim = 11;
  std::size_t action_dim = 5;
  std::vector<std::size_t> actor_hidden{256, 128};
  std::vector<std::size_t> critic_hidden{100, 100};
  double actor_lr = 1e-3;
  double critic_lr = 1e-3;
  double gamma = 0.9;
  double soft_update = 0.005;  // rho in theta' <- rho theta + (1 - rho) theta'
  std::size_t batch_size = 128;
  double action_high = 2.5;    // actions live in [0, action_high]
  double reward_scale = 2e4;   // critic sees reward / reward_scale
  double final_layer_init = 3e-3;
  NoiseKind noise = NoiseKind::kGaussian;
  double ou_theta = 0.15;
  /// Action j only acts when raw state entry j (its track cost) is
  /// positive: such entries are zeroed in critic inputs and get no actor
  /// gradient otherwise.
  bool mask_by_state = false;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(state_dim, action_dim, actor_hidden, critic_hidden, actor_lr, critic_lr, gamma, soft_update,
       batch_size, action_high, reward_scale, final_layer_init, noise, ou_theta, mask_by_state);
  }
};

struct UpdateStats {
  double critic_loss = 0.0;
  double actor_objective = 0.0;  // mean Q(s, mu(s)) over the batch
};

/// Deterministic actor-critic with target networks, experience replay and
/// additive exploration noise.
class DdpgAgent {
 public:
  DdpgAgent() = default;
  DdpgAgent(DdpgConfig cfg, ObsNormalizer norm, RngStream& init_rng);

  /// action = high * sigmoid(actor(normalize(obs))). With sigma > 0, noise
  /// with that standard deviation (in action units) is added and the result
  /// clipped back into [0, high].
  Vec act(std::span<const double> raw_obs, double sigma, RngStream& rng);
  Vec act(std::span<const double> raw_obs) const;

  /// One mini-batch step on critic and actor plus the soft target update.
  /// Returns nothing when the buffer holds fewer than batch_size items.
  std::optional<UpdateStats> update(const ReplayBuffer& buffer, RngStream& rng);

  /// Critic value of a raw (state, action) pair.
  double q_value(std::span<const double> raw_obs, std::span<const double> action) const;

  /// theta' <- rho theta + (1 - rho) theta' for both target networks.
  void soft_update_targets();

  const DdpgConfig& config() const { return cfg_; }
  ObsNormalizer& normalizer() { return norm_; }
  const ObsNormalizer& normalizer() const { return norm_; }
  Mlp& actor() { return actor_; }
  Mlp& critic() { return critic_; }
  const Mlp& actor() const { return actor_; }
  const Mlp& critic() const { return critic_; }
  const Mlp& target_actor() const { return target_actor_; }
  const Mlp& target_critic() const { return target_critic_; }

  template <class Archive>
  void serialize(Archive& ar) {
    ar(cfg_, norm_, actor_, critic_, target_actor_, target_critic_, actor_opt_, critic_opt_, ou_state_);
  }

 private:
  Vec critic_input(std::span<const double> states_norm, std::span<const double> actions_norm,
                   std::size_t batch) const;
  void apply_mask(std::span<const double> raw_state, std::span<double> action) const;

  DdpgConfig cfg_;
  ObsNormalizer norm_;
  Mlp actor_;
  Mlp critic_;
  Mlp target_actor_;
  Mlp target_critic_;
  AdamState actor_opt_;
  AdamState critic_opt_;
  Vec ou_state_;
};

/// Exponential decay from `start` to `end` over the first `decay_slots`
/// slots, constant afterwards.
double noise_sigma(double start, double end, std::int64_t slot, std::int64_t decay_slots);

}  // namespace cogradar
