#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cogradar/sensing.hpp"
#include "oracles.hpp"

using namespace cogradar;
constexpr double kPi = std::numbers::pi;

TEST_CASE("wrap_angle maps into (-pi, pi]") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(3 * kPi / 2) == doctest::Approx(-kPi / 2));
  CHECK(wrap_angle(-5 * kPi / 2) == doctest::Approx(-kPi / 2));
  RngStream r(1);
  for (int i = 0; i < 1000; ++i) {
    const double a = r.uniform(-50, 50);
    const double w = wrap_angle(a);
    CHECK_UNARY(w > -kPi);
    CHECK_UNARY(w <= kPi);
    CHECK(std::remainder(a - w, 2 * kPi) == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("polar measurement of simple points") {
  const Polar p = measure_fn(3000, 4000);
  CHECK(p.range == doctest::Approx(5000));
  CHECK(p.azimuth == doctest::Approx(std::atan2(4000, 3000)));
  CHECK(measure_fn(-1, 0).azimuth == doctest::Approx(kPi));
  CHECK_THROWS_AS(measure_fn(0, 0), UndefinedBearingError);
  CHECK_THROWS_AS(jacobian(0, 0), UndefinedBearingError);
}

TEST_CASE("jacobian structure") {
  const Mat h = jacobian(3000, 4000);
  CHECK(h.rows() == 2);
  CHECK(h.cols() == 4);
  CHECK(h(0, 0) == doctest::Approx(0.6));
  CHECK(h(0, 1) == doctest::Approx(0.8));
  CHECK(h(1, 0) == doctest::Approx(-4000.0 / 25e6));
  CHECK(h(1, 1) == doctest::Approx(3000.0 / 25e6));
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(h(i, 2) == 0.0);
    CHECK(h(i, 3) == 0.0);
  }
}

TEST_CASE("tracking SNR and noise covariance") {
  const SnrModel m;
  CHECK(snr_track(m, 1.0, 3000.0) == doctest::Approx(100.0));
  CHECK(snr_track(m, 2.0, 6000.0) == doctest::Approx(100.0 * 2 / 16));
  CHECK(snr_track(m, 0.0, 3000.0) == 0.0);
  const Mat r = meas_noise_cov(m, 100.0);
  CHECK(r(0, 0) == doctest::Approx(0.16));
  CHECK(r(1, 1) == doctest::Approx(1e-8));
  CHECK(r(0, 1) == 0.0);
  CHECK_THROWS(meas_noise_cov(m, 0.0));
  CHECK_THROWS(meas_noise_cov(m, -1.0));
}

TEST_CASE("noisy measurement statistics and origin tag") {
  TargetState t;
  t.x = 8000;
  t.y = -6000;
  t.id = 17;
  const Mat r = Mat::diag(Vec{25.0, 1e-6});
  RngStream rng(4);
  const int n = 40000;
  double sr = 0, sa = 0, srr = 0;
  for (int i = 0; i < n; ++i) {
    const Measurement z = noisy_measurement(t, r, rng);
    CHECK(z.origin == std::optional<std::int64_t>(17));
    sr += z.range - 10000.0;
    srr += (z.range - 10000.0) * (z.range - 10000.0);
    sa += wrap_angle(z.azimuth - std::atan2(-6000.0, 8000.0));
  }
  CHECK(std::abs(sr / n) < 0.1);
  CHECK(srr / n == doctest::Approx(25.0).epsilon(0.03));
  CHECK(std::abs(sa / n) < 1e-4);
}

TEST_CASE("negative noisy range is reflected through the origin") {
  TargetState t;
  t.x = 0.5;
  t.y = 0.0;
  RngStream rng(6);
  for (int i = 0; i < 2000; ++i) {
    const Measurement z = noisy_measurement(t, Mat::diag(Vec{4.0, 1e-6}), rng);
    CHECK_UNARY(z.range >= 0.0);
    CHECK_UNARY(z.azimuth > -kPi);
    CHECK_UNARY(z.azimuth <= kPi);
  }
}

TEST_CASE("scan timing and calibrated scan SNR") {
  CHECK(scan_time(3.0, 1e-3) == doctest::Approx(0.12));
  CHECK(beam_duration(3.0, scan_time(3.0, 0.01)) == doctest::Approx(0.01));
  ScanModel sm;
  sm.scan_const = ScanModel::calibrate_constant(1e-3, 3000.0, 100.0);
  CHECK(scan_snr(sm, 1e-3, 3000.0) == doctest::Approx(100.0));
  CHECK(scan_snr(sm, 2e-3, 6000.0) == doctest::Approx(100.0 * 2 / 16));
}

TEST_CASE("detection probability: anchors, monotonicity, oracle agreement") {
  using S = SwerlingCase;
  for (double pfa : {1e-4, 1e-6}) {
    CHECK(detection_probability(0.0, pfa) == doctest::Approx(pfa).epsilon(1e-6));
    double prev = 0.0;
    for (double db = -5; db <= 25; db += 0.25) {
      const double pd = detection_probability(std::pow(10.0, db / 10), pfa);
      CHECK_UNARY(pd >= prev);
      CHECK_UNARY(pd <= 1.0);
      prev = pd;
    }
  }
  // lower false-alarm rate never helps detection
  for (double db = 0; db <= 20; db += 1) {
    const double snr = std::pow(10.0, db / 10);
    CHECK_UNARY(detection_probability(snr, 1e-6) <= detection_probability(snr, 1e-4));
  }
  // about 13.2 dB reaches P_d = 0.9 at P_fa = 1e-6 for a steady target
  CHECK(detection_probability(std::pow(10.0, 1.32), 1e-6) == doctest::Approx(0.9).epsilon(0.02));
  CHECK(std::abs(detection_probability(std::pow(10.0, 1.32), 1e-6) - oracle::marcum_pd(std::pow(10.0, 1.32), 1e-6)) <
        0.03);

  for (S sw : {S::kOne, S::kTwo, S::kThree, S::kFour}) {
    double prev = 0.0;
    for (double db = 0; db <= 30; db += 1) {
      const double pd = detection_probability(std::pow(10.0, db / 10), 1e-4, sw);
      CHECK_UNARY(pd >= prev - 1e-12);
      prev = pd;
    }
    // fluctuation loss at high P_d
    CHECK_UNARY(detection_probability(30.0, 1e-4, sw) < detection_probability(30.0, 1e-4));
  }
  CHECK_THROWS(detection_probability(1.0, 0.0));
  CHECK_THROWS(detection_probability(-1.0, 1e-4));
}

TEST_CASE("required SNR inverts the detection probability") {
  for (double pd : {0.1, 0.5, 0.9, 0.99}) {
    for (int sw = 0; sw <= 4; ++sw) {
      const auto c = static_cast<SwerlingCase>(sw);
      const double snr = shnidman_required_snr(pd, 1e-6, c);
      CHECK(detection_probability(snr, 1e-6, c) == doctest::Approx(pd).epsilon(1e-6));
    }
  }
  CHECK_THROWS(shnidman_required_snr(1.0, 1e-6, SwerlingCase::kNonFluctuating));
}

TEST_CASE("scan_pass detections, false alarms and zero beam") {
  ScanModel sm;
  sm.scan_const = ScanModel::calibrate_constant(1e-3, 3000.0, 100.0);
  sm.pfa = 0.0;
  sm.pd_override = 1.0;
  std::vector<TargetState> targets(3);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    targets[i].x = 3000.0 * static_cast<double>(i + 1);
    targets[i].id = static_cast<std::int64_t>(i);
  }
  RngStream rng(1);
  const auto all = scan_pass(targets, sm, SnrModel{}, 1e-3, rng);
  REQUIRE(all.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(*all[i].origin == static_cast<std::int64_t>(i));
  CHECK(scan_pass(targets, sm, SnrModel{}, 0.0, rng).empty());

  sm.pd_override = 0.0;
  CHECK(scan_pass(targets, sm, SnrModel{}, 1e-3, rng).empty());

  sm.pd_override.reset();
  sm.pfa = 0.2;
  int fa = 0;
  for (int i = 0; i < 5000; ++i) {
    for (const auto& z : scan_pass({}, sm, SnrModel{}, 1e-3, rng)) {
      CHECK_FALSE(z.origin.has_value());
      CHECK_UNARY(z.range <= sm.region_radius);
      ++fa;
    }
  }
  CHECK(fa / 5000.0 == doctest::Approx(0.2).epsilon(0.08));
}
