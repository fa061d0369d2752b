#pragma once

#include <cstdint>
#include <span>

#include "cogradar/numerics.hpp"

namespace cogradar {

struct AdamOptions {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  Vec m;
  Vec v;
  std::int64_t t = 0;

  explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}

  bool operator==(const AdamState&) const = default;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(m, v, t);
  }
};

/// In-place Adam step with bias correction.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state, double lr,
               const AdamOptions& opt = {});

}  // namespace cogradar
