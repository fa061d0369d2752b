#pragma once

#include <cstddef>
#include <deque>

namespace cogradar {

/// Lagrange multiplier of the tracking-time budget.
struct DualVariable {
  double lambda = 5000.0;
  double alpha = 5000.0;     // step size
  double theta_max = 0.9;    // budget
  std::size_t window = 0;    // >0: use the moving average of the last `window` usages
  std::deque<double> recent;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(lambda, alpha, theta_max, window, recent);
  }
};

/// Projected dual ascent: lambda <- max(0, lambda + alpha (usage - theta_max)).
DualVariable dual_update(DualVariable dv, double usage);

}  // namespace cogradar
