#pragma once

#include <span>
#include <vector>

#include "vendirl/rng.hpp"

namespace vendirl {

/// Fully connected network with tanh hidden activations and a linear output
/// layer. All parameters live in one flat vector (per layer: row-major
/// out x in weights, then biases), which keeps gradient clipping,
/// finite-difference checks and checkpointing straightforward.
class Mlp {
 public:
  Mlp() = default;

  /// sizes = {input, hidden..., output}. Weights ~ U[-1/sqrt(fan_in),
  /// 1/sqrt(fan_in)], biases zero.
  Mlp(std::vector<int> sizes, Rng& rng);

  struct Cache {
    // activations[0] is the input; activations[l] the post-tanh output of
    // hidden layer l.
    std::vector<std::vector<double>> activations;
  };

  std::vector<double> forward(std::span<const double> input) const;
  std::vector<double> forward(std::span<const double> input, Cache& cache) const;

  /// Accumulates d(loss)/d(params) into `grad` (same layout as params())
  /// given d(loss)/d(output) for the forward pass recorded in `cache`.
  void backward(const Cache& cache, std::span<const double> d_output,
                std::span<double> grad) const;

  const std::vector<int>& sizes() const { return sizes_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  int param_count() const { return static_cast<int>(params_.size()); }
  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }

 private:
  std::vector<int> sizes_;
  std::vector<double> params_;
};

}  // namespace vendirl
