#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "cogradar/motion.hpp"
#include "cogradar/numerics.hpp"

namespace cogradar {

struct UndefinedBearingError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Range/azimuth observation. `origin` is simulation ground truth (the
/// target id, or empty for a false alarm); the tracker never reads it.
struct Measurement {
  double range = 0.0;    // m
  double azimuth = 0.0;  // rad, (-pi, pi]
  std::optional<std::int64_t> origin;

  double x() const;
  double y() const;

  bool operator==(const Measurement&) const = default;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(range, azimuth, origin);
  }
};

struct Polar {
  double range = 0.0;
  double azimuth = 0.0;
};

struct SnrModel {
  double snr0 = 100.0;         // linear
  double tau0 = 1.0;           // s
  double r0 = 3000.0;          // m
  double sigma_r0_sq = 16.0;   // m^2
  double sigma_th0_sq = 1e-6;  // rad^2

  template <class Archive>
  void serialize(Archive& ar) {
    ar(snr0, tau0, r0, sigma_r0_sq, sigma_th0_sq);
  }
};

enum class SwerlingCase : int { kNonFluctuating = 0, kOne = 1, kTwo = 2, kThree = 3, kFour = 4 };

struct ScanModel {
  double phase_delay_deg = 3.0;
  double scan_const = 0.0;  // C in SNR = C * tau_beam / r^4
  double pfa = 1e-4;
  SwerlingCase swerling = SwerlingCase::kNonFluctuating;
  double region_radius = 20000.0;
  /// Test hook: bypasses the SNR -> P_d mapping when set.
  std::optional<double> pd_override;

  /// Collapses the radar-equation constants into C so that a beam of
  /// `tau_beam_ref` seconds at `range_ref` meters yields `snr_ref`.
  static double calibrate_constant(double tau_beam_ref, double range_ref, double snr_ref);

  template <class Archive>
  void serialize(Archive& ar) {
    ar(phase_delay_deg, scan_const, pfa, swerling, region_radius, pd_override);
  }
};

/// Wraps to (-pi, pi].
double wrap_angle(double a);

Polar measure_fn(double x, double y);
inline Polar measure_fn(const TargetState& s) { return measure_fn(s.x, s.y); }

/// 2x4 Jacobian of (range, azimuth) with respect to [x, y, vx, vy].
Mat jacobian(double x, double y);
inline Mat jacobian(const TargetState& s) { return jacobian(s.x, s.y); }

double snr_track(const SnrModel& m, double tau, double r);

/// diag(sigma_r0^2 / snr, sigma_th0^2 / snr). Throws for snr <= 0.
Mat meas_noise_cov(const SnrModel& m, double snr);

/// h(x) + v with v ~ N(0, R). A negative noisy range is reflected through
/// the origin (range negated, azimuth rotated by pi) so range >= 0 holds.
Measurement noisy_measurement(const TargetState& s, const Mat& r, RngStream& rng);

/// Total time for a full 360 degree sweep of beams of `tau_beam` seconds.
double scan_time(double phase_delay_deg, double tau_beam);
/// Per-beam duration that fits a sweep into `scan_budget` seconds.
double beam_duration(double phase_delay_deg, double scan_budget);

double scan_snr(const ScanModel& sm, double tau_beam, double r);

/// Shnidman's approximation: linear single-look SNR required to reach `pd`
/// at false-alarm probability `pfa` with `n_pulses` noncoherently
/// integrated pulses.
double shnidman_required_snr(double pd, double pfa, SwerlingCase sw, int n_pulses = 1);

/// Single-pulse detection probability obtained by inverting Shnidman's
/// equation in P_d. Monotone nondecreasing in snr; equals pfa at snr = 0.
double detection_probability(double snr, double pfa, SwerlingCase sw = SwerlingCase::kNonFluctuating);

/// Scan return of one target: detected with P_d(scan_snr), reported with
/// SNR-scaled noise. Always draws one uniform first.
std::optional<Measurement> detect_target(const TargetState& t, const ScanModel& sm, const SnrModel& noise,
                                        double tau_beam, RngStream& rng);

/// At most one false alarm per sweep, uniform over the surveillance disk.
std::optional<Measurement> false_alarm(const ScanModel& sm, double tau_beam, RngStream& rng);

/// One scanning sweep over the untracked targets. Each target is detected
/// with P_d(scan_snr) and reported with SNR-scaled noise; at most one false
/// alarm (probability pfa) lands uniformly in the surveillance disk. No
/// measurements are produced when tau_beam == 0.
std::vector<Measurement> scan_pass(std::span<const TargetState> untracked, const ScanModel& sm,
                                   const SnrModel& noise, double tau_beam, RngStream& rng);

}  // namespace cogradar
