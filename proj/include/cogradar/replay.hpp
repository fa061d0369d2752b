#pragma once

#include <cstddef>
#include <vector>

#include "cogradar/numerics.hpp"

namespace cogradar {

/// (s_t, a_t, r_t, s_{t+1}) with raw (unnormalized) observations.
struct Transition {
  Vec state;
  Vec action;
  double reward = 0.0;
  Vec next_state;

  bool operator==(const Transition&) const = default;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(state, action, reward, next_state);
  }
};

/// Fixed-capacity FIFO ring of transitions.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = 1'000'000);

  void push(Transition t);
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }

  /// i-th oldest stored transition.
  const Transition& at(std::size_t i) const;

  /// Uniform sample of `n` indices (with replacement) into at().
  std::vector<std::size_t> sample_indices(std::size_t n, RngStream& rng) const;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(capacity_, head_, size_, items_);
  }

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;  // next write position once full
  std::size_t size_ = 0;
  std::vector<Transition> items_;
};

}  // namespace cogradar
