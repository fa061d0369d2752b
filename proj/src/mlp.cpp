#include "cogradar/mlp.hpp"

#include <cmath>
#include <string>

namespace cogradar {

namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < n; ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

inline void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

Mlp::Mlp(std::vector<std::size_t> sizes, OutputActivation output) : sizes_(std::move(sizes)), output_(output) {
  if (sizes_.size() < 2) throw std::invalid_argument("Mlp: need at least input and output sizes");
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    if (sizes_[l] == 0 || sizes_[l + 1] == 0) throw std::invalid_argument("Mlp: zero-width layer");
    offsets_.push_back(total);
    total += sizes_[l] * sizes_[l + 1] + sizes_[l + 1];
  }
  params_.assign(total, 0.0);
}

void Mlp::init(RngStream& rng, double final_range) {
  for (std::size_t l = 0; l < n_layers(); ++l) {
    const bool last = l + 1 == n_layers();
    const double bound = (last && final_range > 0.0) ? final_range : 1.0 / std::sqrt(static_cast<double>(sizes_[l]));
    const std::size_t count = sizes_[l] * sizes_[l + 1] + sizes_[l + 1];
    for (std::size_t k = 0; k < count; ++k) params_[offsets_[l] + k] = rng.uniform(-bound, bound);
  }
}

Vec Mlp::forward(std::span<const double> input, std::size_t batch, MlpTape* tape) const {
  if (input.size() != batch * input_dim()) {
    throw DimensionError("Mlp::forward: got " + std::to_string(input.size()) + " inputs for batch " +
                         std::to_string(batch) + " x " + std::to_string(input_dim()));
  }
  if (tape) {
    tape->batch = batch;
    tape->pre.assign(n_layers(), {});
    tape->activations.assign(n_layers() + 1, {});
    tape->activations[0].assign(input.begin(), input.end());
  }

  Vec a(input.begin(), input.end());
  for (std::size_t l = 0; l < n_layers(); ++l) {
    const std::size_t in = sizes_[l];
    const std::size_t out = sizes_[l + 1];
    const double* w = params_.data() + weight_offset(l);
    const double* bias = params_.data() + bias_offset(l);
    Vec z(batch * out);
    for (std::size_t b = 0; b < batch; ++b) {
      double* zr = z.data() + b * out;
      std::copy(bias, bias + out, zr);
      const double* ar = a.data() + b * in;
      for (std::size_t i = 0; i < in; ++i) {
        if (ar[i] != 0.0) axpy(ar[i], w + i * out, zr, out);
      }
    }
    const bool last = l + 1 == n_layers();
    Vec act = z;
    if (!last) {
      for (double& v : act) v = v > 0.0 ? v : 0.0;
    } else if (output_ == OutputActivation::kSigmoid) {
      for (double& v : act) v = 1.0 / (1.0 + std::exp(-v));
    }
    if (tape) {
      tape->pre[l] = std::move(z);
      tape->activations[l + 1] = act;
    }
    a = std::move(act);
  }
  return a;
}

MlpGradients Mlp::backward(const MlpTape& tape, std::span<const double> upstream, bool want_params,
                           bool want_input) const {
  if (tape.empty()) throw std::logic_error("Mlp::backward: no forward pass recorded");
  const std::size_t batch = tape.batch;
  if (upstream.size() != batch * output_dim()) throw DimensionError("Mlp::backward: upstream shape");

  MlpGradients g;
  if (want_params) g.params.assign(params_.size(), 0.0);

  // delta = dL/dz of the current layer
  Vec delta(upstream.begin(), upstream.end());
  {
    const Vec& y = tape.activations.back();
    if (output_ == OutputActivation::kSigmoid) {
      for (std::size_t k = 0; k < delta.size(); ++k) delta[k] *= y[k] * (1.0 - y[k]);
    }
  }

  for (std::size_t l = n_layers(); l-- > 0;) {
    const std::size_t in = sizes_[l];
    const std::size_t out = sizes_[l + 1];
    const Vec& a_prev = tape.activations[l];
    const double* w = params_.data() + weight_offset(l);

    if (want_params) {
      double* gw = g.params.data() + weight_offset(l);
      double* gb = g.params.data() + bias_offset(l);
      for (std::size_t b = 0; b < batch; ++b) {
        const double* dz = delta.data() + b * out;
        const double* ar = a_prev.data() + b * in;
        axpy(1.0, dz, gb, out);
        for (std::size_t i = 0; i < in; ++i) {
          if (ar[i] != 0.0) axpy(ar[i], dz, gw + i * out, out);
        }
      }
    }

    if (l == 0 && !want_input) break;

    Vec d_prev(batch * in);
    for (std::size_t b = 0; b < batch; ++b) {
      const double* dz = delta.data() + b * out;
      double* dp = d_prev.data() + b * in;
      for (std::size_t i = 0; i < in; ++i) dp[i] = dot(w + i * out, dz, out);
    }
    if (l == 0) {
      g.input = std::move(d_prev);
      break;
    }
    const Vec& z_prev = tape.pre[l - 1];
    for (std::size_t k = 0; k < d_prev.size(); ++k) {
      if (!(z_prev[k] > 0.0)) d_prev[k] = 0.0;
    }
    delta = std::move(d_prev);
  }
  return g;
}

}  // namespace cogradar
