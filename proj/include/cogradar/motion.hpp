#pragma once

#include <cstdint>

#include "cogradar/numerics.hpp"

namespace cogradar {

/// True kinematic state of one target. Positions in meters, velocities in
/// m/s, radar at the origin.
struct TargetState {
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  std::int64_t age = 0;         // slots since spawn
  std::int64_t id = 0;
  std::int64_t spawn_slot = 0;

  Vec kinematics() const { return {x, y, vx, vy}; }
  double range() const;

  bool operator==(const TargetState&) const = default;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(x, y, vx, vy, age, id, spawn_slot);
  }
};

struct MotionParams {
  double revisit_interval = 2.5;  // s
  double sigma_w2 = 16.0;         // (m/s^2)^2

  template <class Archive>
  void serialize(Archive& ar) {
    ar(revisit_interval, sigma_w2);
  }
};

/// Nearly-constant-velocity transition over `T` seconds.
Mat transition_matrix(double T);

/// Discrete white-acceleration process noise for the CV model.
Mat process_noise_cov(double T, double sigma_w2);

/// One slot of ground-truth motion: x <- F x + w, w ~ N(0, Q); age + 1.
TargetState step_target(const TargetState& s, const MotionParams& p, RngStream& rng);

}  // namespace cogradar
