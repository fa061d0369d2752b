#include <doctest.h>

#include <cmath>

#include "cogradar/trackinit.hpp"
#include "oracles.hpp"

using namespace cogradar;

namespace {

Measurement at(double x, double y) {
  Measurement m;
  m.range = std::hypot(x, y);
  m.azimuth = std::atan2(y, x);
  return m;
}

}  // namespace

TEST_CASE("confirmation after exactly K consecutive detections") {
  InitBank bank;
  for (std::int64_t k = 0; k < 2; ++k) {
    CHECK(process_scan(bank, std::vector{at(5000 + 100 * k, 0)}, k, 0).empty());
  }
  REQUIRE(bank.slots.size() == 1);
  CHECK(bank.slots[0].hit_count() == 2);
  const auto c = process_scan(bank, std::vector{at(5200, 0)}, 2, 0);
  REQUIRE(c.size() == 1);
  CHECK(c[0].history.size() == 3);
  CHECK(c[0].confirm_slot == 2);
  CHECK(bank.slots.empty());
}

TEST_CASE("a miss clears the slot") {
  InitBank bank;
  process_scan(bank, std::vector{at(5000, 0)}, 0, 0);
  process_scan(bank, std::vector{at(5050, 0)}, 1, 0);
  process_scan(bank, {}, 2, 0);
  CHECK(bank.slots.empty());
  // starting over takes K more detections
  process_scan(bank, std::vector{at(5100, 0)}, 3, 0);
  process_scan(bank, std::vector{at(5150, 0)}, 4, 0);
  CHECK(process_scan(bank, std::vector{at(5200, 0)}, 5, 0).size() == 1);
}

TEST_CASE("gate is strict") {
  InitBank bank;
  bank.threshold = 500;
  process_scan(bank, std::vector{at(5000, 0)}, 0, 0);
  process_scan(bank, std::vector{at(5500, 0)}, 1, 0);  // exactly T_d away: new slot, old cleared
  REQUIRE(bank.slots.size() == 1);
  CHECK(bank.slots[0].hit_count() == 1);
  CHECK(bank.slots[0].slot_id == 1);
  process_scan(bank, std::vector{at(5999.9, 0)}, 2, 0);
  CHECK(bank.slots[0].hit_count() == 2);
}

TEST_CASE("capacity counts confirmed tracks and open slots") {
  InitBank bank;
  bank.capacity = 5;
  const std::vector<Measurement> many{at(1000, 0), at(0, 3000), at(-5000, 0), at(0, -7000)};
  process_scan(bank, many, 0, 3);
  CHECK(bank.slots.size() == 2);
  InitBank full;
  process_scan(full, many, 0, 5);
  CHECK(full.slots.empty());
}

TEST_CASE("associate picks the nearest gated slot") {
  InitBank bank;
  process_scan(bank, std::vector{at(5000, 0), at(5000, 400)}, 0, 0);
  REQUIRE(bank.slots.size() == 2);
  CHECK(associate(bank, at(5000, 150)) == std::optional<std::int64_t>(0));
  CHECK(associate(bank, at(5000, 300)) == std::optional<std::int64_t>(1));
  CHECK_FALSE(associate(bank, at(9000, 0)).has_value());
}

TEST_CASE("assignment beats the greedy choice when greedy strands a slot") {
  // slot A is nearest to m0, but m0 is slot B's only option
  InitBank bank;
  process_scan(bank, std::vector{at(5000, 0), at(5000, 450)}, 0, 0);
  const std::vector<Measurement> ms{at(5000, 200), at(5000, -300)};
  const auto a = assign_measurements(bank, ms);
  REQUIRE(a.size() == 2);
  CHECK(a[0] == std::optional<std::size_t>(1));
  CHECK(a[1] == std::optional<std::size_t>(0));
}

TEST_CASE("exhaustive 2-slot / 2-measurement scenarios against brute force") {
  const double gate = 500;
  const std::vector<double> offsets{-700, -480, -260, -20, 0, 240, 499.9, 520};
  std::size_t checked = 0;
  for (double s1 : {0.0, 450.0}) {
    for (double m0 : offsets) {
      for (double m1 : offsets) {
        for (std::size_t tracks : {0u, 2u, 3u, 4u}) {
          InitBank bank;
          bank.threshold = gate;
          process_scan(bank, std::vector{at(10000, 0), at(10000, s1 + 1200)}, 0, 0);
          process_scan(bank, std::vector{at(10000, 10), at(10000, s1 + 1210)}, 1, 0);
          REQUIRE(bank.slots.size() == 2);
          const InitBank before = bank;
          const std::vector<Measurement> ms{at(10000, 10 + m0), at(10000, s1 + 1210 + m1 * (m1 > 0 ? 1 : -1))};

          std::vector<std::vector<double>> dist(2, std::vector<double>(2));
          for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) dist[i][j] = measurement_distance(before.slots[i].latest(), ms[j]);
          const auto expect = oracle::brute_force_assignment(dist, 2, gate);
          CHECK(assign_measurements(before, ms) == expect);

          const auto conf = process_scan(bank, ms, 2, tracks);
          // oracle for the bank rules
          std::vector<bool> used(2, false);
          std::size_t n_conf = 0;
          for (std::size_t i = 0; i < 2; ++i) {
            if (expect[i]) {
              used[*expect[i]] = true;
              ++n_conf;  // third hit
            }
          }
          CHECK(conf.size() == n_conf);
          std::size_t open = 0;
          for (std::size_t j = 0; j < 2; ++j)
            if (!used[j] && tracks + n_conf + open < bank.capacity) ++open;
          CHECK(bank.slots.size() == open);
          for (const auto& s : bank.slots) CHECK(s.hit_count() == 1);
          ++checked;
        }
      }
    }
  }
  CHECK(checked == 2 * 8 * 8 * 4);
}
