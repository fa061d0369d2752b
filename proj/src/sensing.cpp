#include "cogradar/sensing.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace cogradar {

namespace {
constexpr double kPi = std::numbers::pi;
}

double Measurement::x() const { return range * std::cos(azimuth); }
double Measurement::y() const { return range * std::sin(azimuth); }

double ScanModel::calibrate_constant(double tau_beam_ref, double range_ref, double snr_ref) {
  if (!(tau_beam_ref > 0.0) || !(range_ref > 0.0) || !(snr_ref > 0.0)) {
    throw std::invalid_argument("ScanModel::calibrate_constant: reference values must be positive");
  }
  const double r2 = range_ref * range_ref;
  return snr_ref * r2 * r2 / tau_beam_ref;
}

double wrap_angle(double a) {
  if (a > -kPi && a <= kPi) return a;
  double w = std::fmod(a + kPi, 2.0 * kPi);
  if (w <= 0.0) w += 2.0 * kPi;
  return w - kPi;
}

Polar measure_fn(double x, double y) {
  if (x == 0.0 && y == 0.0) throw UndefinedBearingError("measure_fn: target at the radar position");
  return {std::hypot(x, y), std::atan2(y, x)};
}

Mat jacobian(double x, double y) {
  const double r2 = x * x + y * y;
  if (r2 == 0.0) throw UndefinedBearingError("jacobian: singular at the origin");
  const double r = std::sqrt(r2);
  Mat h(2, 4);
  h(0, 0) = x / r;
  h(0, 1) = y / r;
  h(1, 0) = -y / r2;
  h(1, 1) = x / r2;
  return h;
}

double snr_track(const SnrModel& m, double tau, double r) {
  const double rr = r / m.r0;
  return m.snr0 * (tau / m.tau0) / (rr * rr * rr * rr);
}

Mat meas_noise_cov(const SnrModel& m, double snr) {
  if (!(snr > 0.0)) throw std::domain_error("meas_noise_cov: SNR must be positive");
  Mat r(2, 2);
  r(0, 0) = m.sigma_r0_sq / snr;
  r(1, 1) = m.sigma_th0_sq / snr;
  return r;
}

Measurement noisy_measurement(const TargetState& s, const Mat& r, RngStream& rng) {
  const Polar p = measure_fn(s);
  const Vec z = sample_gaussian(std::array<double, 2>{p.range, p.azimuth}, r, rng);
  Measurement m;
  m.range = z[0];
  m.azimuth = z[1];
  if (m.range < 0.0) {
    m.range = -m.range;
    m.azimuth += kPi;
  }
  m.azimuth = wrap_angle(m.azimuth);
  m.origin = s.id;
  return m;
}

double scan_time(double phase_delay_deg, double tau_beam) { return 360.0 / phase_delay_deg * tau_beam; }

double beam_duration(double phase_delay_deg, double scan_budget) {
  return scan_budget * phase_delay_deg / 360.0;
}

double scan_snr(const ScanModel& sm, double tau_beam, double r) {
  const double r2 = r * r;
  return sm.scan_const * tau_beam / (r2 * r2);
}

namespace {

double fluctuation_dof(SwerlingCase sw, int n) {
  switch (sw) {
    case SwerlingCase::kNonFluctuating: return std::numeric_limits<double>::infinity();
    case SwerlingCase::kOne: return 1.0;
    case SwerlingCase::kTwo: return n;
    case SwerlingCase::kThree: return 2.0;
    case SwerlingCase::kFour: return 2.0 * n;
  }
  throw std::invalid_argument("unknown Swerling case");
}

double eta_threshold(double pfa) { return std::sqrt(-0.8 * std::log(4.0 * pfa * (1.0 - pfa))); }

double pulse_offset(int n) {
  const double alpha = n < 40 ? 0.0 : 0.25;
  return std::sqrt(n / 2.0 + (alpha - 0.25));
}

void check_pfa(double pfa) {
  if (!(pfa > 0.0 && pfa < 1.0)) throw std::domain_error("false-alarm probability must lie in (0, 1)");
}

}  // namespace

double shnidman_required_snr(double pd, double pfa, SwerlingCase sw, int n_pulses) {
  check_pfa(pfa);
  if (!(pd > 0.0 && pd < 1.0)) throw std::domain_error("shnidman_required_snr: pd must lie in (0, 1)");
  if (n_pulses < 1) throw std::domain_error("shnidman_required_snr: n_pulses < 1");

  const double sgn = pd > 0.5 ? 1.0 : (pd < 0.5 ? -1.0 : 0.0);
  const double eta = eta_threshold(pfa) + sgn * std::sqrt(-0.8 * std::log(4.0 * pd * (1.0 - pd)));
  const double x_inf = eta * (eta + 2.0 * pulse_offset(n_pulses));

  double c = 1.0;
  const double k = fluctuation_dof(sw, n_pulses);
  if (std::isfinite(k)) {
    double c_db = (((17.7006 * pd - 18.4496) * pd + 14.5339) * pd - 3.525) / k;
    if (pd > 0.872) {
      c_db += (std::exp(27.31 * pd - 25.14) +
               (pd - 0.8) * (0.7 * std::log(1e-5 / pfa) + (2.0 * n_pulses - 20.0) / 80.0)) /
              k;
    }
    c = std::pow(10.0, c_db / 10.0);
  }
  return c * x_inf / n_pulses;
}

double detection_probability(double snr, double pfa, SwerlingCase sw) {
  check_pfa(pfa);
  if (snr < 0.0) throw std::domain_error("detection_probability: negative SNR");

  if (sw == SwerlingCase::kNonFluctuating) {
    // Closed-form inverse of x_inf = eta (eta + 2g) for N = 1.
    const double g = pulse_offset(1);
    const double eta = -g + std::sqrt(g * g + snr);
    const double b = eta - eta_threshold(pfa);
    const double s = std::sqrt(-std::expm1(-b * b / 0.8));
    return b >= 0.0 ? 0.5 * (1.0 + s) : 0.5 * (1.0 - s);
  }

  // The fluctuation correction depends on pd itself: bisect on pd.
  double lo = std::min(pfa, 0.5);
  double hi = 1.0 - 1e-12;
  if (snr <= 0.0) return lo;
  if (shnidman_required_snr(hi, pfa, sw) <= snr) return hi;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (shnidman_required_snr(mid, pfa, sw) <= snr) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::optional<Measurement> detect_target(const TargetState& t, const ScanModel& sm, const SnrModel& noise,
                                        double tau_beam, RngStream& rng) {
  if (!(tau_beam > 0.0)) return std::nullopt;
  const double snr = scan_snr(sm, tau_beam, t.range());
  double pd = 0.0;
  if (sm.pd_override) {
    pd = *sm.pd_override;
  } else if (sm.pfa > 0.0) {
    pd = detection_probability(snr, sm.pfa, sm.swerling);
  }
  // One uniform draw per target keeps the stream aligned whatever P_d is.
  const double u = rng.uniform();
  if (u < pd && snr > 0.0) return noisy_measurement(t, meas_noise_cov(noise, snr), rng);
  return std::nullopt;
}

std::optional<Measurement> false_alarm(const ScanModel& sm, double tau_beam, RngStream& rng) {
  if (!(tau_beam > 0.0)) return std::nullopt;
  if (rng.uniform() >= sm.pfa) return std::nullopt;
  Measurement fa;
  fa.range = sm.region_radius * std::sqrt(rng.uniform());
  fa.azimuth = wrap_angle(rng.uniform(-kPi, kPi));
  return fa;
}

std::vector<Measurement> scan_pass(std::span<const TargetState> untracked, const ScanModel& sm,
                                   const SnrModel& noise, double tau_beam, RngStream& rng) {
  std::vector<Measurement> out;
  if (!(tau_beam > 0.0)) return out;
  for (const TargetState& t : untracked)
    if (auto z = detect_target(t, sm, noise, tau_beam, rng)) out.push_back(*z);
  if (auto fa = false_alarm(sm, tau_beam, rng)) out.push_back(*fa);
  return out;
}

}  // namespace cogradar
