#pragma once

// Layer kernels. Every kernel is a free function over Tensor3 values; the
// backward passes return gradients instead of mutating layer state.

#include <span>
#include <vector>

#include "fmp/random.hpp"
#include "fmp/regions.hpp"
#include "fmp/tensor.hpp"

namespace fmp {

/// Valid (unpadded) convolution with an f x f kernel.
/// weights are laid out [dy][dx][in_channel][out_channel].
struct ConvLayer {
  int filter_size = 1;
  int in_channels = 1;
  int out_channels = 1;
  std::vector<double> weights;
  std::vector<double> bias;

  ConvLayer() = default;
  ConvLayer(int filter_size, int in_channels, int out_channels);

  std::size_t weight_index(int dy, int dx, int ci, int co) const {
    return ((static_cast<std::size_t>(dy) * static_cast<std::size_t>(filter_size) +
             static_cast<std::size_t>(dx)) *
                static_cast<std::size_t>(in_channels) +
            static_cast<std::size_t>(ci)) *
               static_cast<std::size_t>(out_channels) +
           static_cast<std::size_t>(co);
  }
  int fan_in() const { return filter_size * filter_size * in_channels; }
};

Tensor3 conv_forward(const Tensor3& input, const ConvLayer& layer);

struct ConvGradients {
  Tensor3 input;
  std::vector<double> weights;
  std::vector<double> bias;
};

ConvGradients conv_backward(const Tensor3& input, const ConvLayer& layer, const Tensor3& grad_out);

/// argmax[k] is the flat index into the pooled input of the value chosen for
/// flat output index k.
struct PoolArtifacts {
  RegionGrid grid;
  std::vector<std::size_t> argmax;
};

struct PoolResult {
  Tensor3 output;
  PoolArtifacts artifacts;
};

/// Per-channel max over each region; ties go to the first cell of a
/// row-major scan of the region.
PoolResult fmp_forward(const Tensor3& input, const RegionGrid& grid);

/// Routes each output gradient to its recorded argmax, accumulating where
/// overlapping regions select the same cell.
Tensor3 fmp_backward(const PoolArtifacts& artifacts, const Tensor3& grad_out, Shape3 input_shape);

/// Plain 2x2 stride-2 max-pooling. Requires even height and width.
struct MaxPool2Result {
  Tensor3 output;
  std::vector<std::size_t> argmax;
};
MaxPool2Result max_pool2_forward(const Tensor3& input);
Tensor3 max_pool2_backward(std::span<const std::size_t> argmax, const Tensor3& grad_out,
                           Shape3 input_shape);

/// Arithmetic mean over each region of a disjoint grid.
Tensor3 avg_pool_regions(const Tensor3& input, const RegionGrid& grid);

Tensor3 leaky_relu(const Tensor3& input, double slope);
/// Gradient through the rectifier given the pre-activation `input`.
Tensor3 leaky_relu_backward(const Tensor3& input, const Tensor3& grad_out, double slope);

/// 0 in the first hidden layer rising linearly to max_rate in the last.
std::vector<double> dropout_schedule(int n_hidden_layers, double max_rate = 0.5);

/// Per-element multipliers: 0 for dropped units, 1 / (1 - rate) for kept ones.
std::vector<double> dropout_mask(std::size_t size, double rate, Rng& rng);
/// In-place elementwise product; used for both the forward and backward pass.
void apply_mask(Tensor3& tensor, std::span<const double> mask);

std::vector<double> softmax(std::span<const double> logits);

struct LossResult {
  double loss;
  std::vector<double> grad_logits;
};
LossResult softmax_xent(std::span<const double> logits, int label);

}  // namespace fmp
