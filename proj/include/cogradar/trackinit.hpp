#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cogradar/sensing.hpp"

namespace cogradar {

/// Tentative track: consecutive associated detections, most recent last.
struct InitSlot {
  std::int64_t slot_id = 0;
  std::vector<Measurement> history;
  std::int64_t last_update_slot = 0;

  std::size_t hit_count() const { return history.size(); }
  const Measurement& latest() const { return history.back(); }

  template <class Archive>
  void serialize(Archive& ar) {
    ar(slot_id, history, last_update_slot);
  }
};

struct InitBank {
  std::vector<InitSlot> slots;
  std::size_t capacity = 5;   // M, shared with confirmed tracks
  double threshold = 500.0;   // T_d, meters
  std::size_t confirm_k = 3;  // K
  std::int64_t next_slot_id = 0;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(slots, capacity, threshold, confirm_k, next_slot_id);
  }
};

struct Confirmation {
  std::int64_t slot_id = 0;
  std::vector<Measurement> history;
  std::int64_t confirm_slot = 0;
};

/// Cartesian distance between two polar measurements.
double measurement_distance(const Measurement& a, const Measurement& b);

/// Slot whose latest measurement is nearest to `z`, if strictly closer than
/// the gate. Ties go to the lowest slot id.
std::optional<std::int64_t> associate(const InitBank& bank, const Measurement& z);

/// Gated one-to-one assignment between slots and measurements that first
/// maximizes the number of pairs and then minimizes their total distance.
/// Returns, per slot (in bank order), the assigned measurement index.
std::vector<std::optional<std::size_t>> assign_measurements(const InitBank& bank,
                                                            std::span<const Measurement> measurements);

/// Applies one scan pass to the bank:
///  - associated measurements extend their slot;
///  - slots with no associated measurement are cleared;
///  - slots reaching K hits are emitted as confirmations and removed;
///  - leftover measurements open new slots while
///    n_confirmed_tracks + confirmations + slots < capacity.
std::vector<Confirmation> process_scan(InitBank& bank, std::span<const Measurement> measurements,
                                       std::int64_t slot_index, std::size_t n_confirmed_tracks);

}  // namespace cogradar
