#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "cogradar/numerics.hpp"

namespace cogradar {

enum class OutputActivation { kIdentity, kSigmoid };

/// Values cached by a forward pass and consumed by backward().
struct MlpTape {
  std::size_t batch = 0;
  std::vector<Vec> pre;          // pre-activations per layer
  std::vector<Vec> activations;  // activations[0] = input, then post-activation per layer
  bool empty() const { return activations.empty(); }
};

struct MlpGradients {
  Vec params;  // same layout as Mlp::params()
  Vec input;   // batch x input_dim, empty when not requested
};

/// Fully connected network with ReLU between hidden layers.
///
/// Parameters live in one flat vector, layer by layer: a weight block stored
/// input-major (W[i * out + o]) followed by the bias. Batches are row-major
/// (batch x features).
class Mlp {
 public:
  Mlp() = default;
  Mlp(std::vector<std::size_t> sizes, OutputActivation output);

  /// Uniform fan-in initialization, U(-1/sqrt(fan_in), 1/sqrt(fan_in)); the
  /// last layer uses U(-final_range, final_range) when final_range > 0.
  void init(RngStream& rng, double final_range = 0.0);

  std::size_t input_dim() const { return sizes_.front(); }
  std::size_t output_dim() const { return sizes_.back(); }
  std::size_t n_layers() const { return sizes_.size() - 1; }
  std::size_t n_params() const { return params_.size(); }
  const std::vector<std::size_t>& sizes() const { return sizes_; }
  OutputActivation output_activation() const { return output_; }

  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }

  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  std::size_t bias_offset(std::size_t layer) const {
    return offsets_[layer] + sizes_[layer] * sizes_[layer + 1];
  }

  Vec forward(std::span<const double> input, std::size_t batch, MlpTape* tape = nullptr) const;

  /// Reverse-mode pass for dL/d(output) = `upstream`. Parameter gradients
  /// are skipped when `want_params` is false. Throws std::logic_error if the
  /// tape holds no forward pass.
  MlpGradients backward(const MlpTape& tape, std::span<const double> upstream, bool want_params = true,
                        bool want_input = false) const;

  bool operator==(const Mlp&) const = default;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(sizes_, output_, offsets_, params_);
  }

 private:
  std::vector<std::size_t> sizes_;
  OutputActivation output_ = OutputActivation::kIdentity;
  std::vector<std::size_t> offsets_;
  Vec params_;
};

}  // namespace cogradar
