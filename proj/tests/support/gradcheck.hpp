#pragma once

// Central-difference check of Mlp::backward, shared by the unit and
// acceptance suites.

#include <algorithm>
#include <cmath>
#include <vector>

#include "cogradar/mlp.hpp"

namespace gradcheck {

struct Result {
  double max_rel_error = 0.0;
  double max_input_rel_error = 0.0;
  std::size_t n_params = 0;
};

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

/// Loss L = sum_k w_k * out_k over a random batch; compares dL/dtheta and
/// dL/dinput with central differences of step h.
inline Result run(cogradar::Mlp net, std::size_t batch, cogradar::RngStream& rng, double h = 1e-5) {
  const std::size_t in = net.input_dim(), out = net.output_dim();
  cogradar::Vec x(batch * in), w(batch * out);
  for (double& v : x) v = rng.uniform(-1, 1);
  for (double& v : w) v = rng.uniform(-1, 1);
  auto loss = [&](const cogradar::Mlp& n, const cogradar::Vec& input) {
    const cogradar::Vec y = n.forward(input, batch);
    double s = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) s += w[k] * y[k];
    return s;
  };
  cogradar::MlpTape tape;
  net.forward(x, batch, &tape);
  const cogradar::MlpGradients g = net.backward(tape, w, true, true);

  Result r;
  r.n_params = net.n_params();
  auto p = net.params();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double p0 = p[i];
    p[i] = p0 + h;
    const double lp = loss(net, x);
    p[i] = p0 - h;
    const double lm = loss(net, x);
    p[i] = p0;
    r.max_rel_error = std::max(r.max_rel_error, rel_err(g.params[i], (lp - lm) / (2 * h)));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    cogradar::Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    r.max_input_rel_error = std::max(r.max_input_rel_error, rel_err(g.input[i], (loss(net, xp) - loss(net, xm)) / (2 * h)));
  }
  return r;
}

}  // namespace gradcheck
