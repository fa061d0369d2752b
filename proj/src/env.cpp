#include "cogradar/env.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace cogradar {

namespace {
enum Stream : std::uint64_t { kTruth = 1, kTrack = 2, kScan = 3 };
}

Vec EnvObservation::to_vector() const {
  Vec v;
  v.reserve(size());
  v.insert(v.end(), prev_costs.begin(), prev_costs.end());
  v.insert(v.end(), prev_dwells.begin(), prev_dwells.end());
  v.push_back(dual);
  return v;
}

EnvObservation EnvObservation::from_vector(std::span<const double> v) {
  if (v.size() % 2 != 1) throw DimensionError("EnvObservation: length must be 2N+1");
  const std::size_t n = v.size() / 2;
  EnvObservation o;
  o.prev_costs.assign(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n));
  o.prev_dwells.assign(v.begin() + static_cast<std::ptrdiff_t>(n), v.end() - 1);
  o.dual = v.back();
  return o;
}

double utility(std::span<const double> costs, std::size_t n_miss, double beta) {
  double u = 0.0;
  for (double c : costs) u -= c;
  return u - beta * static_cast<double>(n_miss);
}

double budget_usage(std::span<const double> dwells, double t0) {
  double s = 0.0;
  for (double d : dwells) s += d;
  return s / t0;
}

double reward(double utility_value, double usage, double lambda, double theta_max) {
  return utility_value - lambda * (usage - theta_max);
}

Vec fixed_policy(double fraction, std::span<const bool> active, double t0) {
  if (fraction < 0.0 || fraction > 1.0) throw std::invalid_argument("fixed_policy: fraction outside [0, 1]");
  const auto n_active = static_cast<std::size_t>(std::count(active.begin(), active.end(), true));
  Vec a(active.size(), 0.0);
  if (n_active == 0) return a;
  const double each = fraction * t0 / static_cast<double>(n_active);
  for (std::size_t i = 0; i < active.size(); ++i)
    if (active[i]) a[i] = each;
  return a;
}

Environment::Environment(EnvConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.scan.region_radius = cfg_.region_radius;
  reset(0);
}

EnvObservation Environment::reset(std::uint64_t seed) {
  const std::size_t n = cfg_.n_targets();
  targets_.clear();
  tracks_.assign(n, std::nullopt);
  bank_ = InitBank{};
  bank_.capacity = cfg_.max_slots;
  bank_.threshold = cfg_.confirm_threshold;
  bank_.confirm_k = cfg_.confirm_k;
  truth_rng_ = RngStream(derive_seed(seed, kTruth));
  track_seed_ = derive_seed(seed, kTrack);
  scan_seed_ = derive_seed(seed, kScan);
  slot_ = 0;
  next_target_id_ = 0;
  obs_.prev_costs.assign(n, 0.0);
  obs_.prev_dwells.assign(n, 0.0);
  obs_.dual = cfg_.lambda0;
  return obs_;
}

std::vector<bool> Environment::active_mask() const {
  std::vector<bool> m(tracks_.size());
  for (std::size_t i = 0; i < tracks_.size(); ++i) m[i] = tracks_[i].has_value();
  return m;
}

std::size_t Environment::n_tracked() const {
  return static_cast<std::size_t>(
      std::count_if(tracks_.begin(), tracks_.end(), [](const auto& t) { return t.has_value(); }));
}

bool Environment::is_tracked(std::int64_t target_id) const {
  return std::any_of(tracks_.begin(), tracks_.end(),
                     [&](const auto& t) { return t && t->target_id == target_id; });
}

std::int64_t Environment::add_target(double x, double y, double vx, double vy) {
  TargetState t;
  t.x = x;
  t.y = y;
  t.vx = vx;
  t.vy = vy;
  t.id = next_target_id_++;
  t.spawn_slot = slot_;
  targets_.push_back(t);
  return t.id;
}

void Environment::move_and_spawn() {
  std::vector<TargetState> alive;
  alive.reserve(targets_.size() + 1);
  for (const TargetState& t : targets_) {
    TargetState next = step_target(t, cfg_.tracking.motion, truth_rng_);
    if (next.age > cfg_.spawn.max_age || next.range() > cfg_.region_radius) continue;
    alive.push_back(next);
  }
  targets_ = std::move(alive);

  for (auto& tr : tracks_) {
    if (tr && std::none_of(targets_.begin(), targets_.end(),
                           [&](const TargetState& t) { return t.id == tr->target_id; })) {
      tr.reset();
    }
  }

  const SpawnConfig& sp = cfg_.spawn;
  if (sp.spawn_period > 0 && slot_ % sp.spawn_period == 0 && targets_.size() < sp.max_targets) {
    if (truth_rng_.uniform() < sp.spawn_prob) {
      const double r = std::sqrt(truth_rng_.uniform(sp.radius_min * sp.radius_min, sp.radius_max * sp.radius_max));
      const double bearing = truth_rng_.uniform(-std::numbers::pi, std::numbers::pi);
      const double speed = truth_rng_.uniform(sp.speed_min, sp.speed_max);
      const double heading = truth_rng_.uniform(-std::numbers::pi, std::numbers::pi);
      add_target(r * std::cos(bearing), r * std::sin(bearing), speed * std::cos(heading),
                 speed * std::sin(heading));
    }
  }
}

StepResult Environment::step(std::span<const double> action, double lambda) {
  const std::size_t n = cfg_.n_targets();
  const double t0 = cfg_.revisit_interval();
  if (action.size() != n) {
    throw DimensionError("Environment::step: action has " + std::to_string(action.size()) +
                         " entries, expected " + std::to_string(n));
  }
  for (double a : action) {
    if (!(a >= 0.0 && a <= t0)) throw std::invalid_argument("Environment::step: dwell outside [0, T0]");
  }

  SlotReport rep;
  rep.slot_index = slot_;
  rep.lambda = lambda;
  rep.costs.assign(n, std::nullopt);
  rep.dwells.assign(n, std::nullopt);
  rep.dists.assign(n, std::nullopt);

  // 1) ground truth
  move_and_spawn();

  // 2) tracking; dwell only counts for occupied track slots
  Vec applied(n, 0.0);
  std::vector<double> costs;
  for (std::size_t i = 0; i < n; ++i) {
    if (!tracks_[i]) continue;
    const auto truth = std::find_if(targets_.begin(), targets_.end(),
                                    [&](const TargetState& t) { return t.id == tracks_[i]->target_id; });
    applied[i] = action[i];
    RngStream rng(derive_seed(derive_seed(track_seed_, static_cast<std::uint64_t>(slot_)),
                              static_cast<std::uint64_t>(truth->id)));
    tracks_[i] = track_step(*tracks_[i], *truth, action[i], cfg_.tracking, rng);
    costs.push_back(tracks_[i]->cost);
    rep.costs[i] = tracks_[i]->cost;
    rep.dwells[i] = action[i];
    rep.dists[i] = truth->range();
  }
  rep.usage = budget_usage(applied, t0);
  rep.n_tracked = costs.size();

  // 3) scanning with the residual time
  const double tau_scan = std::max(0.0, t0 - rep.usage * t0);
  const double tau_beam = beam_duration(cfg_.scan.phase_delay_deg, tau_scan);
  const std::uint64_t scan_slot_seed = derive_seed(scan_seed_, static_cast<std::uint64_t>(slot_));
  std::vector<Measurement> meas;
  for (const TargetState& t : targets_) {
    if (is_tracked(t.id)) continue;
    RngStream rng(derive_seed(scan_slot_seed, static_cast<std::uint64_t>(t.id) + 1));
    if (auto z = detect_target(t, cfg_.scan, cfg_.tracking.snr, tau_beam, rng)) meas.push_back(*z);
  }
  RngStream fa_rng(derive_seed(scan_slot_seed, 0));
  if (auto fa = false_alarm(cfg_.scan, tau_beam, fa_rng)) meas.push_back(*fa);
  const auto confirmations = process_scan(bank_, meas, slot_, rep.n_tracked);

  // 4) scanning metric
  rep.n_targets = targets_.size();
  rep.n_miss = rep.n_targets - rep.n_tracked;

  // 5) objective
  rep.utility = utility(costs, rep.n_miss, cfg_.beta);
  rep.reward = reward(rep.utility, rep.usage, lambda, cfg_.theta_max);

  // confirmed slots become tracks bound to the nearest untracked target
  for (const Confirmation& c : confirmations) {
    const Measurement& z = c.history.back();
    const TargetState* nearest = nullptr;
    double best = std::numeric_limits<double>::infinity();
    for (const TargetState& t : targets_) {
      if (is_tracked(t.id)) continue;
      const double d = std::hypot(t.x - z.x(), t.y - z.y());
      if (d < best) {
        best = d;
        nearest = &t;
      }
    }
    const auto free_slot = std::find_if(tracks_.begin(), tracks_.end(), [](const auto& t) { return !t; });
    if (!nearest || free_slot == tracks_.end()) continue;
    *free_slot = init_track(nearest->id);
    rep.confirmed_ids.push_back(nearest->id);
    rep.confirm_latencies.push_back(slot_ - nearest->spawn_slot);
  }

  for (std::size_t i = 0; i < n; ++i) {
    obs_.prev_costs[i] = tracks_[i] ? tracks_[i]->cost : 0.0;
    obs_.prev_dwells[i] = applied[i];
  }
  obs_.dual = lambda;
  ++slot_;
  return {obs_, std::move(rep)};
}

}  // namespace cogradar
