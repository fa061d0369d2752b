#include "cogradar/trackinit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cogradar {

double measurement_distance(const Measurement& a, const Measurement& b) {
  return std::hypot(a.x() - b.x(), a.y() - b.y());
}

std::optional<std::int64_t> associate(const InitBank& bank, const Measurement& z) {
  std::optional<std::int64_t> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (const InitSlot& s : bank.slots) {
    const double d = measurement_distance(s.latest(), z);
    if (d >= bank.threshold) continue;
    if (d < best_d || (d == best_d && best && s.slot_id < *best)) {
      best_d = d;
      best = s.slot_id;
    }
  }
  return best;
}

namespace {

struct Search {
  std::vector<std::vector<std::pair<std::size_t, double>>> gated;  // per slot
  std::vector<bool> used;
  std::vector<std::optional<std::size_t>> current;
  std::vector<std::optional<std::size_t>> best;
  std::size_t best_count = 0;
  double best_total = std::numeric_limits<double>::infinity();

  void run(std::size_t slot, std::size_t count, double total) {
    if (slot == gated.size()) {
      if (count > best_count || (count == best_count && total < best_total)) {
        best_count = count;
        best_total = total;
        best = current;
      }
      return;
    }
    for (const auto& [m, d] : gated[slot]) {
      if (used[m]) continue;
      used[m] = true;
      current[slot] = m;
      run(slot + 1, count + 1, total + d);
      used[m] = false;
    }
    current[slot].reset();
    run(slot + 1, count, total);
  }
};

}  // namespace

std::vector<std::optional<std::size_t>> assign_measurements(const InitBank& bank,
                                                            std::span<const Measurement> measurements) {
  Search search;
  search.gated.resize(bank.slots.size());
  for (std::size_t s = 0; s < bank.slots.size(); ++s) {
    for (std::size_t m = 0; m < measurements.size(); ++m) {
      const double d = measurement_distance(bank.slots[s].latest(), measurements[m]);
      if (d < bank.threshold) search.gated[s].emplace_back(m, d);
    }
    std::stable_sort(search.gated[s].begin(), search.gated[s].end(),
                     [](const auto& a, const auto& b) { return a.second < b.second; });
  }
  search.used.assign(measurements.size(), false);
  search.current.assign(bank.slots.size(), std::nullopt);
  search.best.assign(bank.slots.size(), std::nullopt);
  search.best_total = 0.0;
  search.run(0, 0, 0.0);
  return search.best;
}

std::vector<Confirmation> process_scan(InitBank& bank, std::span<const Measurement> measurements,
                                       std::int64_t slot_index, std::size_t n_confirmed_tracks) {
  const auto assignment = assign_measurements(bank, measurements);

  std::vector<bool> consumed(measurements.size(), false);
  std::vector<InitSlot> kept;
  kept.reserve(bank.slots.size());
  for (std::size_t s = 0; s < bank.slots.size(); ++s) {
    if (!assignment[s]) continue;  // cleared
    InitSlot slot = std::move(bank.slots[s]);
    slot.history.push_back(measurements[*assignment[s]]);
    slot.last_update_slot = slot_index;
    consumed[*assignment[s]] = true;
    kept.push_back(std::move(slot));
  }
  bank.slots = std::move(kept);

  std::vector<Confirmation> confirmed;
  auto promote = [&] {
    auto it = std::stable_partition(bank.slots.begin(), bank.slots.end(),
                                    [&](const InitSlot& s) { return s.hit_count() < bank.confirm_k; });
    for (auto p = it; p != bank.slots.end(); ++p) {
      confirmed.push_back({p->slot_id, std::move(p->history), slot_index});
    }
    bank.slots.erase(it, bank.slots.end());
  };
  promote();

  for (std::size_t m = 0; m < measurements.size(); ++m) {
    if (consumed[m]) continue;
    if (n_confirmed_tracks + confirmed.size() + bank.slots.size() >= bank.capacity) break;
    InitSlot slot;
    slot.slot_id = bank.next_slot_id++;
    slot.history.push_back(measurements[m]);
    slot.last_update_slot = slot_index;
    bank.slots.push_back(std::move(slot));
  }
  promote();
  return confirmed;
}

}  // namespace cogradar
