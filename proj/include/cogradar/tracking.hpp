#pragma once

#include <cstdint>
#include <optional>

#include "cogradar/motion.hpp"
#include "cogradar/numerics.hpp"
#include "cogradar/sensing.hpp"

namespace cogradar {

/// Confirmed track: EKF posterior plus the last tracking cost.
struct Track {
  Vec estimate = Vec(4, 0.0);     // [x, y, vx, vy]
  Mat covariance = Mat::identity(4);
  double cost = 2.0;              // m^2, trace of the position block
  std::int64_t target_id = -1;
  double dwell_last = 0.0;        // s
  std::int64_t skipped_updates = 0;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(estimate, covariance, cost, target_id, dwell_last, skipped_updates);
  }
};

struct Prediction {
  Vec estimate;
  Mat covariance;
};

/// Linearized measurement model around some point: z ≈ predicted + H (x - x_pred).
struct Linearization {
  Mat h;
  Vec predicted;
};

struct UpdateResult {
  Vec estimate;
  Mat covariance;
  bool updated = true;  // false when the innovation covariance was singular
};

Prediction ekf_predict(std::span<const double> estimate, const Mat& covariance, const Mat& f,
                       const Mat& q);

/// Kalman update with gain K = P Hᵀ S⁻¹ and P+ = (I - K H) P, symmetrized.
/// Dimensions are generic so the same routine serves scalar tests. When
/// `angle_component` is set the innovation in that component is wrapped to
/// (-pi, pi]. A singular S leaves the prediction untouched.
UpdateResult ekf_update(const Prediction& pred, std::span<const double> z, const Linearization& lin,
                        const Mat& r, std::optional<std::size_t> angle_component = std::nullopt);

/// Fresh track with no prior knowledge: x = 0, P = I.
Track init_track(std::int64_t target_id);

/// trace(E P Eᵀ) with E selecting the position block.
double tracking_cost(const Mat& p);

struct TrackingModels {
  MotionParams motion;
  SnrModel snr;
  /// Lower bound on the dwell used for the SNR, as a fraction of T0.
  double min_dwell_fraction = 1e-4;
  /// Below this predicted range the polar Jacobian is not usable and the
  /// model is linearized at the measured position instead.
  double min_linearization_range = 1.0;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(motion, snr, min_dwell_fraction, min_linearization_range);
  }
};

/// Polar measurement model linearized at the predicted state, or at the
/// measured position when the prediction sits (near) the radar.
Linearization linearize_polar(std::span<const double> predicted, const Measurement& z,
                              double min_range);

/// One slot for one confirmed track: predict with (F(T0), Q(T0)), draw the
/// radar return of `truth` with the dwell-dependent noise, update, refresh
/// the cost.
Track track_step(const Track& tr, const TargetState& truth, double tau, const TrackingModels& models,
                 RngStream& rng);

}  // namespace cogradar
