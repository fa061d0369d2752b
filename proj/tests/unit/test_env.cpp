#include <doctest.h>

#include <cmath>

#include "cogradar/env.hpp"

using namespace cogradar;

namespace {

EnvConfig quiet_config() {
  EnvConfig c;
  c.spawn.spawn_prob = 0.0;
  c.scan.scan_const = ScanModel::calibrate_constant(1e-3, 3000.0, 100.0);
  return c;
}

}  // namespace

TEST_CASE("utility, usage and reward algebra") {
  CHECK(utility(Vec{10, 20}, 1, 2e4) == -20030.0);
  CHECK(utility(Vec{}, 0, 2e4) == 0.0);
  CHECK(budget_usage(Vec{1.0, 1.25}, 2.5) == doctest::Approx(0.9));
  CHECK(reward(-100, 1.0, 5000, 0.9) == doctest::Approx(-600));
  CHECK(reward(-100, 0.5, 5000, 0.9) == doctest::Approx(1900));  // bonus below budget
  // affine in lambda with slope -(usage - theta)
  const double r1 = reward(-50, 0.7, 100, 0.9), r2 = reward(-50, 0.7, 300, 0.9);
  CHECK((r2 - r1) / 200 == doctest::Approx(0.2));
}

TEST_CASE("fixed policy spreads the share over active slots") {
  const bool act[5] = {true, false, true, false, false};
  const Vec a = fixed_policy(0.9, act, 2.5);
  CHECK(a[0] == doctest::Approx(1.125));
  CHECK(a[1] == 0.0);
  CHECK(a[2] == doctest::Approx(1.125));
  const bool none[5] = {};
  CHECK(fixed_policy(0.9, none, 2.5) == Vec(5, 0.0));
  CHECK_THROWS(fixed_policy(1.2, act, 2.5));
}

TEST_CASE("observation vector round trip and initial state") {
  Environment env(quiet_config());
  const EnvObservation o = env.reset(1);
  CHECK(o.size() == 11);
  CHECK(o.dual == 5000.0);
  CHECK(o.prev_costs == Vec(5, 0.0));
  CHECK(EnvObservation::from_vector(o.to_vector()) == o);
  CHECK_THROWS_AS(EnvObservation::from_vector(Vec(10, 0.0)), DimensionError);
}

TEST_CASE("step validates the action") {
  Environment env(quiet_config());
  env.reset(1);
  CHECK_THROWS_AS(env.step(Vec(4, 0.0), 0.0), DimensionError);
  CHECK_THROWS(env.step(Vec{3.0, 0, 0, 0, 0}, 0.0));
  CHECK_THROWS(env.step(Vec{-0.1, 0, 0, 0, 0}, 0.0));
}

TEST_CASE("n_miss goes 1,1,1,0 for one target detected every sweep") {
  EnvConfig c = quiet_config();
  c.scan.pd_override = 1.0;
  c.scan.pfa = 0.0;
  Environment env(c);
  env.reset(3);
  const auto id = env.add_target(6000, 2000, 0, 0);
  std::vector<std::size_t> miss;
  std::vector<std::size_t> tracked;
  for (int k = 0; k < 4; ++k) {
    const StepResult r = env.step(Vec(5, 2.5), 0.0);
    miss.push_back(r.report.n_miss);
    tracked.push_back(r.report.n_tracked);
    if (k == 2) {
      REQUIRE(r.report.confirmed_ids.size() == 1);
      CHECK(r.report.confirmed_ids[0] == id);
      CHECK(r.report.confirm_latencies[0] == 2);
      // the new track shows up in the next observation at cost 2
      CHECK(r.observation.prev_costs[0] == 2.0);
    }
  }
  CHECK(miss == std::vector<std::size_t>{1, 1, 1, 0});
  CHECK(tracked == std::vector<std::size_t>{0, 0, 0, 1});
}

TEST_CASE("dwell only counts for occupied track slots; scan gets the rest") {
  EnvConfig c = quiet_config();
  c.scan.pd_override = 1.0;
  c.scan.pfa = 0.0;
  Environment env(c);
  env.reset(4);
  env.add_target(5000, 0, 0, 0);
  for (int k = 0; k < 3; ++k) {
    const auto r = env.step(Vec(5, 2.5), 0.0);
    CHECK(r.report.usage == 0.0);
  }
  const auto r = env.step(Vec{1.0, 2.5, 2.5, 2.5, 2.5}, 1000.0);
  CHECK(r.report.usage == doctest::Approx(0.4));
  REQUIRE(r.report.dwells[0].has_value());
  CHECK(*r.report.dwells[0] == 1.0);
  CHECK_FALSE(r.report.dwells[1].has_value());
  CHECK(r.report.reward == doctest::Approx(r.report.utility - 1000.0 * (0.4 - 0.9)));
  CHECK(r.observation.prev_dwells == Vec{1.0, 0, 0, 0, 0});
  CHECK(r.observation.dual == 1000.0);
  REQUIRE(r.report.dists[0].has_value());
  CHECK(*r.report.dists[0] == doctest::Approx(5000.0).epsilon(0.05));  // process noise moves it
}

TEST_CASE("full tracking budget starves the scan") {
  EnvConfig c = quiet_config();
  c.scan.pd_override = 1.0;
  c.scan.pfa = 0.0;
  Environment env(c);
  env.reset(5);
  env.add_target(5000, 0, 0, 0);
  for (int k = 0; k < 3; ++k) env.step(Vec(5, 0.0), 0.0);
  REQUIRE(env.n_tracked() == 1);
  env.add_target(-7000, 0, 0, 0);
  for (int k = 0; k < 10; ++k) {
    const auto r = env.step(Vec{2.5, 0, 0, 0, 0}, 0.0);
    CHECK(r.report.n_miss == 1);
  }
  CHECK(env.bank().slots.empty());
}

TEST_CASE("targets leaving the region or ageing out disappear with their track") {
  EnvConfig c = quiet_config();
  c.scan.pd_override = 1.0;
  c.scan.pfa = 0.0;
  c.tracking.motion.sigma_w2 = 0.0;
  c.spawn.max_age = 6;
  Environment env(c);
  env.reset(6);
  env.add_target(19000, 0, 400, 0);  // crosses 20 km after three slots
  env.add_target(3000, 0, 0, 0);
  std::size_t max_targets = 0;
  for (int k = 0; k < 8; ++k) {
    const auto r = env.step(Vec(5, 0.5), 0.0);
    max_targets = std::max(max_targets, r.report.n_targets);
    CHECK(r.report.n_miss == r.report.n_targets - r.report.n_tracked);
  }
  CHECK(max_targets == 2);
  CHECK(env.targets().empty());
  CHECK(env.n_tracked() == 0);
}

TEST_CASE("spawning respects the period, the cap and the annulus") {
  EnvConfig c;
  c.scan.scan_const = ScanModel::calibrate_constant(1e-3, 3000.0, 100.0);
  c.spawn.spawn_prob = 1.0;
  c.spawn.spawn_period = 10;
  c.spawn.max_targets = 3;
  c.spawn.speed_min = c.spawn.speed_max = 0.0;
  c.tracking.motion.sigma_w2 = 0.0;
  Environment env(c);
  env.reset(7);
  for (int k = 0; k < 60; ++k) {
    const auto r = env.step(Vec(3, 0.0), 0.0);
    CHECK(r.report.n_targets <= 3);
    CHECK(r.report.n_targets == std::min<std::size_t>(3, static_cast<std::size_t>(k / 10 + 1)));
  }
  for (const auto& t : env.targets()) {
    CHECK_UNARY(t.range() >= c.spawn.radius_min - 1e-9);
    CHECK_UNARY(t.range() <= c.spawn.radius_max + 1e-9);
  }
}

TEST_CASE("same seed gives the same report stream; targets do not depend on the policy") {
  EnvConfig c;
  c.scan.scan_const = ScanModel::calibrate_constant(1e-3, 3000.0, 100.0);
  c.spawn.spawn_prob = 0.5;
  auto run = [&](double dwell) {
    Environment env(c);
    env.reset(11);
    std::vector<std::pair<std::size_t, double>> out;
    for (int k = 0; k < 3000; ++k) {
      const auto r = env.step(Vec(5, dwell), 100.0);
      out.emplace_back(r.report.n_targets, r.report.utility);
    }
    return out;
  };
  const auto a = run(0.5), b = run(0.5), d = run(2.0);
  CHECK(a == b);
  std::size_t differ = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].first == d[i].first);
    differ += a[i].second != d[i].second;
  }
  CHECK(differ > 0);
}
