#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cogradar/motion.hpp"
#include "cogradar/numerics.hpp"
#include "cogradar/sensing.hpp"
#include "cogradar/trackinit.hpp"
#include "cogradar/tracking.hpp"

namespace cogradar {

struct SpawnConfig {
  std::int64_t spawn_period = 100;  // slots between spawn attempts
  double spawn_prob = 0.05;
  std::int64_t max_age = 3000;      // slots
  std::size_t max_targets = 5;      // N
  double radius_min = 2000.0;       // m, spawn annulus
  double radius_max = 18000.0;
  double speed_min = 50.0;          // m/s
  double speed_max = 300.0;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(spawn_period, spawn_prob, max_age, max_targets, radius_min, radius_max, speed_min, speed_max);
  }
};

struct EnvConfig {
  TrackingModels tracking;
  ScanModel scan;
  SpawnConfig spawn;
  double region_radius = 20000.0;   // m
  double confirm_threshold = 500.0; // T_d, m
  std::size_t confirm_k = 3;        // K
  std::size_t max_slots = 5;        // M
  double beta = 2e4;
  double theta_max = 0.9;
  double lambda0 = 5000.0;

  double revisit_interval() const { return tracking.motion.revisit_interval; }
  std::size_t n_targets() const { return spawn.max_targets; }

  template <class Archive>
  void serialize(Archive& ar) {
    ar(tracking, scan, spawn, region_radius, confirm_threshold, confirm_k, max_slots, beta, theta_max, lambda0);
  }
};

/// Agent state: [costs of the N track slots, their dwells, dual], all from
/// the previous slot, zero for empty track slots.
struct EnvObservation {
  Vec prev_costs;
  Vec prev_dwells;
  double dual = 0.0;

  std::size_t size() const { return prev_costs.size() + prev_dwells.size() + 1; }
  Vec to_vector() const;
  static EnvObservation from_vector(std::span<const double> v);

  bool operator==(const EnvObservation&) const = default;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(prev_costs, prev_dwells, dual);
  }
};

struct SlotReport {
  std::int64_t slot_index = 0;
  std::size_t n_targets = 0;
  std::size_t n_tracked = 0;
  std::size_t n_miss = 0;
  double usage = 0.0;  // sum of applied dwells / T0
  double lambda = 0.0;
  double utility = 0.0;
  double reward = 0.0;
  std::vector<std::optional<double>> costs;  // per track slot, tracked this slot
  std::vector<std::optional<double>> dwells; // applied dwell per track slot
  std::vector<std::optional<double>> dists;  // true range of the tracked target
  std::vector<std::int64_t> confirmed_ids;
  std::vector<std::int64_t> confirm_latencies;  // slots from spawn to confirmation
};

struct StepResult {
  EnvObservation observation;
  SlotReport report;
};

double utility(std::span<const double> costs, std::size_t n_miss, double beta);
double budget_usage(std::span<const double> dwells, double t0);
double reward(double utility_value, double usage, double lambda, double theta_max);

/// Spreads fraction * T0 evenly over the active track slots.
Vec fixed_policy(double fraction, std::span<const bool> active, double t0);

/// Time-slotted tracking + scanning simulator.
///
/// Each step runs, in order: target motion, despawn and spawn; one EKF step
/// per confirmed track with its dwell; a scan sweep with the time left over
/// feeding track initialization; the miss count; utility and reward. Tracks
/// confirmed by the sweep join the observation immediately and receive
/// dwell from the next action on.
///
/// Ground truth draws from one stream derived from the seed, so runs with
/// the same seed see the same targets whatever the policy. Tracking returns
/// and scan detections use a fresh stream per (slot, target), so two
/// policies in the same situation also get the same noise and detections.
class Environment {
 public:
  explicit Environment(EnvConfig cfg);

  EnvObservation reset(std::uint64_t seed);
  StepResult step(std::span<const double> action, double lambda);

  const EnvConfig& config() const { return cfg_; }
  std::size_t action_dim() const { return cfg_.n_targets(); }
  std::size_t observation_dim() const { return 2 * cfg_.n_targets() + 1; }
  std::int64_t slot_index() const { return slot_; }

  const std::vector<TargetState>& targets() const { return targets_; }
  const std::vector<std::optional<Track>>& tracks() const { return tracks_; }
  const InitBank& bank() const { return bank_; }
  const EnvObservation& observation() const { return obs_; }
  std::vector<bool> active_mask() const;
  std::size_t n_tracked() const;

  /// Places a target in the scene (spawned at the current slot). Returns its id.
  std::int64_t add_target(double x, double y, double vx, double vy);

  template <class Archive>
  void serialize(Archive& ar) {
    RngStream::State truth = truth_rng_.state();
    ar(cfg_, targets_, tracks_, bank_, truth, track_seed_, scan_seed_, slot_, next_target_id_, obs_);
    truth_rng_.set_state(truth);
  }

 private:
  void move_and_spawn();
  bool is_tracked(std::int64_t target_id) const;

  EnvConfig cfg_;
  std::vector<TargetState> targets_;
  std::vector<std::optional<Track>> tracks_;
  InitBank bank_;
  RngStream truth_rng_;
  std::uint64_t track_seed_ = 0;
  std::uint64_t scan_seed_ = 0;
  std::int64_t slot_ = 0;
  std::int64_t next_target_id_ = 0;
  EnvObservation obs_;
};

}  // namespace cogradar
