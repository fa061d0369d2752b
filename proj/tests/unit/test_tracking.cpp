#include <doctest.h>

#include <cmath>

#include "cogradar/motion.hpp"
#include "cogradar/tracking.hpp"
#include "oracles.hpp"

using namespace cogradar;

namespace {

Mat random_spd(std::size_t n, RngStream& r, double scale) {
  Mat a(n, n);
  for (double& v : a.data()) v = r.uniform(-1, 1) * scale;
  Mat p = mat_mul(a, transpose(a));
  for (std::size_t i = 0; i < n; ++i) p(i, i) += 0.1 * scale * scale;
  return p;
}

oracle::M to_m(const Mat& a) {
  oracle::M m(a.rows(), std::vector<double>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m[i][j] = a(i, j);
  return m;
}

}  // namespace

TEST_CASE("fresh track: origin, identity covariance, cost 2") {
  const Track t = init_track(4);
  CHECK(t.estimate == Vec(4, 0.0));
  CHECK(t.covariance == Mat::identity(4));
  CHECK(t.cost == 2.0);
  CHECK(t.target_id == 4);
}

TEST_CASE("tracking cost is the position block trace") {
  RngStream r(2);
  for (int k = 0; k < 50; ++k) {
    const Mat p = random_spd(4, r, 10.0);
    // E P E^T with E = [I2 0]
    const Mat e{{1, 0, 0, 0}, {0, 1, 0, 0}};
    CHECK(tracking_cost(p) == doctest::Approx(trace(mat_mul(mat_mul(e, p), transpose(e)))));
  }
  CHECK_THROWS_AS(tracking_cost(Mat::identity(2)), DimensionError);
}

TEST_CASE("prediction: F P F^T + Q, symmetric") {
  RngStream r(3);
  const Mat p = random_spd(4, r, 3.0);
  const Mat f = transition_matrix(2.5);
  const Mat q = process_noise_cov(2.5, 16.0);
  const Prediction pr = ekf_predict(Vec{1, 2, 3, 4}, p, f, q);
  CHECK(pr.estimate == Vec{1 + 7.5, 2 + 10, 3, 4});
  const Mat expected = add(mat_mul(mat_mul(f, p), transpose(f)), q);
  CHECK(max_abs(sub(pr.covariance, expected)) < 1e-9);
  CHECK(pr.covariance == transpose(pr.covariance));
}

TEST_CASE("update agrees with the Joseph form and never raises the trace") {
  RngStream r(5);
  for (int k = 0; k < 100; ++k) {
    const Mat p = random_spd(4, r, r.uniform(0.5, 50.0));
    const double x = r.uniform(-15000, 15000), y = r.uniform(-15000, 15000);
    const Mat h = jacobian(x, y);
    const Mat rr = Mat::diag(Vec{r.uniform(0.01, 50), r.uniform(1e-9, 1e-5)});
    const Polar hp = measure_fn(x, y);
    const UpdateResult u =
        ekf_update(Prediction{Vec{x, y, 0, 0}, p}, Vec{hp.range + 1, hp.azimuth}, Linearization{h, Vec{hp.range, hp.azimuth}}, rr, 1);
    REQUIRE(u.updated);
    const auto jos = oracle::joseph_posterior(to_m(p), to_m(h), to_m(rr));
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        CHECK(std::abs(u.covariance(i, j) - jos[i][j]) <= 1e-6 * (1.0 + std::abs(jos[i][j])));
    CHECK_UNARY(tracking_cost(u.covariance) <= tracking_cost(p) + 1e-9);
    CHECK(u.covariance == transpose(u.covariance));
  }
}

TEST_CASE("angle innovation is wrapped") {
  const Mat p = Mat::identity(4);
  const double x = -10000, y = 1.0;  // azimuth just below pi
  const Polar hp = measure_fn(x, y);
  const Linearization lin{jacobian(x, y), {hp.range, hp.azimuth}};
  const Vec z{hp.range, hp.azimuth - 2 * std::numbers::pi + 1e-6};
  const Mat rr = Mat::diag(Vec{1.0, 1e-6});
  const UpdateResult wrapped = ekf_update(Prediction{Vec{x, y, 0, 0}, p}, z, lin, rr, 1);
  const UpdateResult direct =
      ekf_update(Prediction{Vec{x, y, 0, 0}, p}, Vec{hp.range, hp.azimuth + 1e-6}, lin, rr, 1);
  for (std::size_t i = 0; i < 4; ++i) CHECK(wrapped.estimate[i] == doctest::Approx(direct.estimate[i]));
}

TEST_CASE("singular innovation covariance leaves the prediction untouched") {
  const Prediction pr{Vec{1, 1, 0, 0}, Mat(4, 4)};
  const Linearization lin{Mat(2, 4), Vec{0, 0}};
  const UpdateResult u = ekf_update(pr, Vec{1, 1}, lin, Mat(2, 2));
  CHECK_FALSE(u.updated);
  CHECK(u.estimate == pr.estimate);
}

TEST_CASE("linearization falls back to the measured point near the radar") {
  Measurement z;
  z.range = 5000;
  z.azimuth = 0.3;
  const Linearization far = linearize_polar(Vec{4000, 1000, 0, 0}, z, 1.0);
  CHECK(far.predicted[0] == doctest::Approx(std::hypot(4000, 1000)));
  const Linearization near = linearize_polar(Vec{0, 0, 0, 0}, z, 1.0);
  // h(x0) + H0 (0 - x0): the range row gives r - r = 0
  CHECK(near.predicted[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(near.h == jacobian(z.x(), z.y()));
}

TEST_CASE("track_step pulls a fresh track onto the target and shrinks the cost") {
  TargetState t;
  t.x = 6000;
  t.y = 2000;
  t.vx = 100;
  t.vy = -50;
  TrackingModels m;
  RngStream rng(9);
  Track tr = init_track(0);
  double first_cost = 0.0;
  for (int k = 0; k < 30; ++k) {
    t = step_target(t, MotionParams{2.5, 0.0}, rng);
    tr = track_step(tr, t, 2.5, m, rng);
    if (k == 0) first_cost = tr.cost;
    CHECK(std::isfinite(tr.cost));
  }
  CHECK_UNARY(std::hypot(tr.estimate[0] - t.x, tr.estimate[1] - t.y) < 50.0);
  CHECK(tr.skipped_updates == 0);
  CHECK(tr.dwell_last == 2.5);
  (void)first_cost;
}

TEST_CASE("more dwell gives a lower steady-state cost") {
  auto steady = [](double tau) {
    TargetState t;
    t.x = 9000;
    t.y = 0;
    TrackingModels m;
    RngStream rng(1);
    Track tr = init_track(0);
    for (int k = 0; k < 200; ++k) tr = track_step(tr, t, tau, m, rng);
    return tr.cost;
  };
  const double lo = steady(0.25), mid = steady(1.25), hi = steady(2.5);
  CHECK_UNARY(hi < mid);
  CHECK_UNARY(mid < lo);
}

TEST_CASE("zero dwell uses the floor instead of failing") {
  TargetState t;
  t.x = 5000;
  TrackingModels m;
  RngStream rng(2);
  Track tr = init_track(0);
  for (int k = 0; k < 5; ++k) tr = track_step(tr, t, 0.0, m, rng);
  CHECK(std::isfinite(tr.cost));
  CHECK(tr.dwell_last == 0.0);
}
