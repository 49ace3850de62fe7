#include "vendirl/mlp.hpp"

#include <cmath>
#include <string>

#include "vendirl/error.hpp"

namespace vendirl {

namespace {

int layer_param_count(int in, int out) { return out * in + out; }

}  // namespace

Mlp::Mlp(std::vector<int> sizes, Rng& rng) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) fail(ErrorCode::bad_parameter, "Mlp: need input and output sizes");
  for (int s : sizes_)
    if (s < 1) fail(ErrorCode::bad_parameter, "Mlp: layer sizes must be positive");

  int total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l)
    total += layer_param_count(sizes_[l], sizes_[l + 1]);
  params_.resize(total);

  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    int in = sizes_[l], out = sizes_[l + 1];
    double bound = 1.0 / std::sqrt(static_cast<double>(in));
    for (int i = 0; i < out * in; ++i) params_[offset + i] = rng.uniform(-bound, bound);
    for (int i = 0; i < out; ++i) params_[offset + out * in + i] = 0.0;
    offset += layer_param_count(in, out);
  }
}

std::vector<double> Mlp::forward(std::span<const double> input) const {
  Cache cache;
  return forward(input, cache);
}

std::vector<double> Mlp::forward(std::span<const double> input, Cache& cache) const {
  if (static_cast<int>(input.size()) != sizes_.front())
    fail(ErrorCode::shape_mismatch, "Mlp::forward: input size mismatch");

  cache.activations.clear();
  cache.activations.emplace_back(input.begin(), input.end());

  std::vector<double> current(input.begin(), input.end());
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    int in = sizes_[l], out = sizes_[l + 1];
    const double* w = params_.data() + offset;
    const double* b = w + static_cast<std::size_t>(out) * in;
    std::vector<double> next(out);
    for (int o = 0; o < out; ++o) {
      double z = b[o];
      const double* row = w + static_cast<std::size_t>(o) * in;
      for (int i = 0; i < in; ++i) z += row[i] * current[i];
      next[o] = z;
    }
    bool last = (l + 2 == sizes_.size());
    if (!last) {
      for (double& v : next) v = std::tanh(v);
      cache.activations.push_back(next);
    }
    current = std::move(next);
    offset += layer_param_count(in, out);
  }
  return current;
}

void Mlp::backward(const Cache& cache, std::span<const double> d_output,
                   std::span<double> grad) const {
  if (static_cast<int>(d_output.size()) != sizes_.back())
    fail(ErrorCode::shape_mismatch, "Mlp::backward: output gradient size mismatch");
  if (static_cast<int>(grad.size()) != param_count())
    fail(ErrorCode::shape_mismatch, "Mlp::backward: gradient buffer size mismatch");
  if (cache.activations.size() != sizes_.size() - 1)
    fail(ErrorCode::invalid_input, "Mlp::backward: cache does not match a forward pass");

  // layer offsets into the flat parameter vector
  std::vector<std::size_t> offsets(sizes_.size() - 1);
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets[l] = offset;
    offset += layer_param_count(sizes_[l], sizes_[l + 1]);
  }

  std::vector<double> delta(d_output.begin(), d_output.end());
  for (int l = static_cast<int>(sizes_.size()) - 2; l >= 0; --l) {
    int in = sizes_[l], out = sizes_[l + 1];
    const std::vector<double>& a_prev = cache.activations[l];
    const double* w = params_.data() + offsets[l];
    double* gw = grad.data() + offsets[l];
    double* gb = gw + static_cast<std::size_t>(out) * in;

    for (int o = 0; o < out; ++o) {
      double* grow = gw + static_cast<std::size_t>(o) * in;
      for (int i = 0; i < in; ++i) grow[i] += delta[o] * a_prev[i];
      gb[o] += delta[o];
    }
    if (l > 0) {
      std::vector<double> prev(in, 0.0);
      for (int o = 0; o < out; ++o) {
        const double* row = w + static_cast<std::size_t>(o) * in;
        for (int i = 0; i < in; ++i) prev[i] += row[i] * delta[o];
      }
      // a_prev holds tanh outputs of layer l-1
      for (int i = 0; i < in; ++i) prev[i] *= 1.0 - a_prev[i] * a_prev[i];
      delta = std::move(prev);
    }
  }
}

}  // namespace vendirl
