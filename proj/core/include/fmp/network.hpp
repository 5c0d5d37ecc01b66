#pragma once

#include <span>
#include <vector>

#include "fmp/layers.hpp"
#include "fmp/netspec.hpp"
#include "fmp/random.hpp"

namespace fmp {

/// One pooling grid per FMP layer, in network order.
using RegionSet = std::vector<RegionGrid>;

/// Trainable instance of a sized NetworkSpec. Every convolution is followed
/// by a leaky rectifier (and dropout while training); the output layer is a
/// linear map from the final 1 x 1 x C activation to the class logits.
class Network {
 public:
  /// Parameters start at zero; see `initialize`.
  Network(NetworkSpec spec, int in_channels, int class_count, double leaky_slope);

  /// Zero-mean uniform weights scaled by 1 / sqrt(fan_in) (rectifier gain
  /// included), zero biases.
  void initialize(Rng& rng);

  const NetworkSpec& spec() const { return spec_; }
  int input_size() const { return spec_.input_size(); }
  int in_channels() const { return in_channels_; }
  int class_count() const { return class_count_; }
  double leaky_slope() const { return leaky_slope_; }
  int n_hidden() const { return static_cast<int>(layers_.size()) - 1; }

  /// Hidden convolutions followed by the output layer.
  const std::vector<ConvLayer>& conv_layers() const { return layers_; }

  /// Parameter blocks in layer order: weights then bias of each convolution,
  /// ending with the output layer.
  std::size_t block_count() const { return 2 * layers_.size(); }
  std::span<double> block(std::size_t k);
  std::span<const double> block(std::size_t k) const;
  std::size_t parameter_count() const;

  RegionSet sample_regions(Rng& rng) const;
  /// Deterministic pseudorandom grids using offset `u` on every axis of
  /// every FMP layer, regardless of the layer's configured kind.
  RegionSet pseudorandom_regions(double u) const;

  /// Inference pass: no dropout. `input` must already be padded.
  std::vector<double> logits(const Tensor3& input, const RegionSet& regions) const;

  struct Gradients {
    std::vector<std::vector<double>> blocks;
  };
  Gradients zero_gradients() const;

  struct SampleResult {
    double loss;
    std::vector<double> logits;
  };
  /// Training pass with dropout (rates per hidden layer; empty means none),
  /// accumulating parameter gradients of the cross-entropy loss into `grads`.
  SampleResult accumulate_gradients(const Tensor3& input, int label, const RegionSet& regions,
                                    std::span<const double> dropout_rates, Rng& rng,
                                    Gradients& grads) const;

 private:
  struct Trace;
  std::vector<double> run_forward(const Tensor3& input, const RegionSet& regions,
                                  std::span<const double> dropout_rates, Rng* rng, Trace* trace) const;

  NetworkSpec spec_;
  int in_channels_;
  int class_count_;
  double leaky_slope_;
  std::vector<ConvLayer> layers_;
};

}  // namespace fmp
