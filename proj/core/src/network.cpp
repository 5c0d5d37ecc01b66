#include "fmp/network.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "fmp/error.hpp"

namespace fmp {

struct Network::Trace {
  struct Step {
    Tensor3 input;
    Tensor3 pre_activation;
    std::vector<double> mask;
    std::optional<PoolArtifacts> pool;
    std::vector<std::size_t> mp2_argmax;
  };
  std::vector<Step> steps;
};

Network::Network(NetworkSpec spec, int in_channels, int class_count, double leaky_slope)
    : spec_(std::move(spec)), in_channels_(in_channels), class_count_(class_count), leaky_slope_(leaky_slope) {
  if (!spec_.sized()) spec_ = compute_sizes(std::move(spec_));
  if (in_channels < 1) throw InvalidParameterError("network needs at least one input channel");
  if (class_count < 2) throw InvalidParameterError("network needs at least two classes");
  if (!(leaky_slope >= 0.0 && leaky_slope < 1.0)) throw InvalidParameterError("leaky slope must lie in [0, 1)");
  int channels = in_channels;
  for (const auto& layer : spec_.layers) {
    if (const auto* c = std::get_if<ConvSpec>(&layer)) {
      layers_.emplace_back(c->filter_size, channels, c->filters);
      channels = c->filters;
    }
  }
  layers_.emplace_back(1, channels, class_count);
}

void Network::initialize(Rng& rng) {
  for (auto& layer : layers_) {
    // variance 2 / ((1 + slope^2) fan_in) keeps activation scale through the rectifiers
    const double bound = std::sqrt(6.0 / ((1.0 + leaky_slope_ * leaky_slope_) * layer.fan_in()));
    for (double& w : layer.weights) w = rng.uniform(-bound, bound);
    std::fill(layer.bias.begin(), layer.bias.end(), 0.0);
  }
}

std::span<double> Network::block(std::size_t k) {
  auto& layer = layers_.at(k / 2);
  return k % 2 == 0 ? std::span<double>(layer.weights) : std::span<double>(layer.bias);
}

std::span<const double> Network::block(std::size_t k) const {
  const auto& layer = layers_.at(k / 2);
  return k % 2 == 0 ? std::span<const double>(layer.weights) : std::span<const double>(layer.bias);
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t k = 0; k < block_count(); ++k) n += block(k).size();
  return n;
}

RegionSet Network::sample_regions(Rng& rng) const {
  RegionSet regions;
  for (std::size_t k = 0; k < spec_.layers.size(); ++k) {
    if (const auto* f = std::get_if<FmpSpec>(&spec_.layers[k])) {
      regions.push_back(sample_region_grid(spec_.spatial_sizes[k], spec_.spatial_sizes[k + 1], f->kind,
                                           f->mode, rng));
    }
  }
  return regions;
}

RegionSet Network::pseudorandom_regions(double u) const {
  RegionSet regions;
  for (std::size_t k = 0; k < spec_.layers.size(); ++k) {
    if (const auto* f = std::get_if<FmpSpec>(&spec_.layers[k])) {
      const int n_in = spec_.spatial_sizes[k];
      const int n_out = spec_.spatial_sizes[k + 1];
      regions.push_back(build_regions(pseudorandom_sequence(n_in, n_out, u),
                                      pseudorandom_sequence(n_in, n_out, u), f->mode));
    }
  }
  return regions;
}

std::vector<double> Network::run_forward(const Tensor3& input, const RegionSet& regions,
                                         std::span<const double> dropout_rates, Rng* rng,
                                         Trace* trace) const {
  const int side = input_size();
  if (input.height() != side || input.width() != side || input.channels() != in_channels_) {
    throw ShapeError("network expects " + std::to_string(side) + "x" + std::to_string(side) + "x" +
                     std::to_string(in_channels_) + " input");
  }
  Tensor3 x = input;
  std::size_t conv_k = 0;
  std::size_t pool_k = 0;
  for (const auto& layer : spec_.layers) {
    Trace::Step step;
    if (trace != nullptr) step.input = x;
    if (std::holds_alternative<ConvSpec>(layer)) {
      Tensor3 z = conv_forward(x, layers_[conv_k]);
      x = leaky_relu(z, leaky_slope_);
      const double rate = conv_k < dropout_rates.size() ? dropout_rates[conv_k] : 0.0;
      if (rate > 0.0) {
        step.mask = dropout_mask(x.size(), rate, *rng);
        apply_mask(x, step.mask);
      }
      if (trace != nullptr) step.pre_activation = std::move(z);
      ++conv_k;
    } else if (std::holds_alternative<FmpSpec>(layer)) {
      if (pool_k >= regions.size()) throw ShapeError("missing pooling grid for FMP layer");
      auto pooled = fmp_forward(x, regions[pool_k++]);
      x = std::move(pooled.output);
      if (trace != nullptr) step.pool = std::move(pooled.artifacts);
    } else if (std::holds_alternative<Mp2Spec>(layer)) {
      auto pooled = max_pool2_forward(x);
      x = std::move(pooled.output);
      if (trace != nullptr) step.mp2_argmax = std::move(pooled.argmax);
    } else {
      x = conv_forward(x, layers_.back());
    }
    if (trace != nullptr) trace->steps.push_back(std::move(step));
  }
  const auto v = x.values();
  return {v.begin(), v.end()};
}

std::vector<double> Network::logits(const Tensor3& input, const RegionSet& regions) const {
  return run_forward(input, regions, {}, nullptr, nullptr);
}

Network::Gradients Network::zero_gradients() const {
  Gradients g;
  for (std::size_t k = 0; k < block_count(); ++k) g.blocks.emplace_back(block(k).size(), 0.0);
  return g;
}

Network::SampleResult Network::accumulate_gradients(const Tensor3& input, int label, const RegionSet& regions,
                                                    std::span<const double> dropout_rates, Rng& rng,
                                                    Gradients& grads) const {
  Trace trace;
  auto out = run_forward(input, regions, dropout_rates, &rng, &trace);
  auto loss = softmax_xent(out, label);

  Tensor3 grad(1, 1, class_count_, 0.0);
  std::copy(loss.grad_logits.begin(), loss.grad_logits.end(), grad.values().begin());
  std::size_t conv_k = layers_.size() - 1;
  for (std::size_t k = spec_.layers.size(); k-- > 0;) {
    auto& step = trace.steps[k];
    const auto& layer = spec_.layers[k];
    if (std::holds_alternative<OutputSpec>(layer) || std::holds_alternative<ConvSpec>(layer)) {
      const std::size_t idx = std::holds_alternative<OutputSpec>(layer) ? layers_.size() - 1 : --conv_k;
      if (std::holds_alternative<ConvSpec>(layer)) {
        if (!step.mask.empty()) apply_mask(grad, step.mask);
        grad = leaky_relu_backward(step.pre_activation, grad, leaky_slope_);
      }
      auto g = conv_backward(step.input, layers_[idx], grad);
      auto& gw = grads.blocks[2 * idx];
      auto& gb = grads.blocks[2 * idx + 1];
      for (std::size_t i = 0; i < gw.size(); ++i) gw[i] += g.weights[i];
      for (std::size_t i = 0; i < gb.size(); ++i) gb[i] += g.bias[i];
      grad = std::move(g.input);
    } else if (std::holds_alternative<FmpSpec>(layer)) {
      grad = fmp_backward(*step.pool, grad, step.input.shape());
    } else {
      grad = max_pool2_backward(step.mp2_argmax, grad, step.input.shape());
    }
  }
  return {loss.loss, std::move(out)};
}

}  // namespace fmp
