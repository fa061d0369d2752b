#include "cogradar/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace cogradar {

Prediction ekf_predict(std::span<const double> estimate, const Mat& covariance, const Mat& f,
                       const Mat& q) {
  Prediction p;
  p.estimate = mat_vec(f, estimate);
  p.covariance = add(mat_mul(mat_mul(f, covariance), transpose(f)), q);
  symmetrize(p.covariance);
  return p;
}

UpdateResult ekf_update(const Prediction& pred, std::span<const double> z, const Linearization& lin,
                        const Mat& r, std::optional<std::size_t> angle_component) {
  const Mat& h = lin.h;
  const Mat ht = transpose(h);
  const Mat pht = mat_mul(pred.covariance, ht);
  Mat s = add(mat_mul(h, pht), r);
  symmetrize(s);

  Mat s_inv;
  try {
    s_inv = invert_spd(s);
  } catch (const SingularMatrixError&) {
    return {pred.estimate, pred.covariance, false};
  }

  const Mat k = mat_mul(pht, s_inv);

  Vec innov(z.begin(), z.end());
  for (std::size_t i = 0; i < innov.size(); ++i) innov[i] -= lin.predicted[i];
  if (angle_component) innov[*angle_component] = wrap_angle(innov[*angle_component]);

  UpdateResult out;
  out.estimate = pred.estimate;
  const Vec dx = mat_vec(k, innov);
  for (std::size_t i = 0; i < dx.size(); ++i) out.estimate[i] += dx[i];

  const std::size_t n = pred.covariance.rows();
  const Mat i_kh = sub(Mat::identity(n), mat_mul(k, h));
  out.covariance = mat_mul(i_kh, pred.covariance);
  symmetrize(out.covariance);
  return out;
}

Track init_track(std::int64_t target_id) {
  Track t;
  t.target_id = target_id;
  t.cost = tracking_cost(t.covariance);
  return t;
}

double tracking_cost(const Mat& p) {
  if (p.rows() != 4 || p.cols() != 4) throw DimensionError("tracking_cost: expected 4x4 covariance");
  return p(0, 0) + p(1, 1);
}

Linearization linearize_polar(std::span<const double> predicted, const Measurement& z,
                              double min_range) {
  const double px = predicted[0];
  const double py = predicted[1];
  if (std::hypot(px, py) >= min_range) {
    const Polar hp = measure_fn(px, py);
    return {jacobian(px, py), {hp.range, hp.azimuth}};
  }
  // Expand around the measured position x0: h(x) ≈ h(x0) + H0 (x - x0),
  // so the predicted measurement is h(x0) + H0 (x_pred - x0).
  const double x0 = z.x();
  const double y0 = z.y();
  Linearization lin{jacobian(x0, y0), {z.range, z.azimuth}};
  const double dx = px - x0;
  const double dy = py - y0;
  lin.predicted[0] += lin.h(0, 0) * dx + lin.h(0, 1) * dy;
  lin.predicted[1] += lin.h(1, 0) * dx + lin.h(1, 1) * dy;
  return lin;
}

Track track_step(const Track& tr, const TargetState& truth, double tau, const TrackingModels& models,
                 RngStream& rng) {
  const double t0 = models.motion.revisit_interval;
  const Mat f = transition_matrix(t0);
  const Mat q = process_noise_cov(t0, models.motion.sigma_w2);
  const Prediction pred = ekf_predict(tr.estimate, tr.covariance, f, q);

  const double dwell = std::max(tau, models.min_dwell_fraction * t0);
  const Mat r = meas_noise_cov(models.snr, snr_track(models.snr, dwell, truth.range()));
  const Measurement z = noisy_measurement(truth, r, rng);

  const Linearization lin = linearize_polar(pred.estimate, z, models.min_linearization_range);
  const std::array<double, 2> zv{z.range, z.azimuth};
  UpdateResult up = ekf_update(pred, zv, lin, r, 1);

  Track out = tr;
  out.estimate = std::move(up.estimate);
  out.covariance = std::move(up.covariance);
  out.cost = tracking_cost(out.covariance);
  out.dwell_last = tau;
  if (!up.updated) {
    ++out.skipped_updates;
    std::clog << "cogradar: singular innovation covariance for target " << tr.target_id
              << ", predict-only step\n";
  }
  return out;
}

}  // namespace cogradar
