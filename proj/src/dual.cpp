#include "cogradar/dual.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cogradar {

DualVariable dual_update(DualVariable dv, double usage) {
  if (usage < 0.0) throw std::invalid_argument("dual_update: negative usage");
  double signal = usage;
  if (dv.window > 0) {
    dv.recent.push_back(usage);
    while (dv.recent.size() > dv.window) dv.recent.pop_front();
    signal = std::accumulate(dv.recent.begin(), dv.recent.end(), 0.0) / static_cast<double>(dv.recent.size());
  }
  dv.lambda = std::max(0.0, dv.lambda + dv.alpha * (signal - dv.theta_max));
  return dv;
}

}  // namespace cogradar
