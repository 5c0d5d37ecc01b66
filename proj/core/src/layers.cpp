#include "fmp/layers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fmp/error.hpp"

namespace fmp {

ConvLayer::ConvLayer(int filter_size, int in_channels, int out_channels)
    : filter_size(filter_size),
      in_channels(in_channels),
      out_channels(out_channels),
      weights(static_cast<std::size_t>(filter_size * filter_size * in_channels * out_channels), 0.0),
      bias(static_cast<std::size_t>(out_channels), 0.0) {
  if (filter_size < 1 || in_channels < 1 || out_channels < 1) {
    throw InvalidParameterError("convolution dimensions must be positive");
  }
}

namespace {

void check_conv(const Tensor3& input, const ConvLayer& layer) {
  if (input.channels() != layer.in_channels) {
    throw ShapeError("conv expects " + std::to_string(layer.in_channels) + " channels, got " +
                     std::to_string(input.channels()));
  }
  if (input.height() < layer.filter_size || input.width() < layer.filter_size) {
    throw ShapeError("conv input smaller than filter");
  }
}

Shape3 conv_output_shape(const Tensor3& input, const ConvLayer& layer) {
  return {input.height() - layer.filter_size + 1, input.width() - layer.filter_size + 1,
          layer.out_channels};
}

}  // namespace

Tensor3 conv_forward(const Tensor3& input, const ConvLayer& layer) {
  check_conv(input, layer);
  Tensor3 out(conv_output_shape(input, layer));
  const int f = layer.filter_size;
  const int n_out = layer.out_channels;
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      auto acc = out.pixel(y, x);
      std::copy(layer.bias.begin(), layer.bias.end(), acc.begin());
      for (int dy = 0; dy < f; ++dy) {
        for (int dx = 0; dx < f; ++dx) {
          const auto in = input.pixel(y + dy, x + dx);
          for (int ci = 0; ci < layer.in_channels; ++ci) {
            const double v = in[static_cast<std::size_t>(ci)];
            const double* w = layer.weights.data() + layer.weight_index(dy, dx, ci, 0);
            for (int co = 0; co < n_out; ++co) acc[static_cast<std::size_t>(co)] += v * w[co];
          }
        }
      }
    }
  }
  return out;
}

ConvGradients conv_backward(const Tensor3& input, const ConvLayer& layer, const Tensor3& grad_out) {
  check_conv(input, layer);
  if (grad_out.shape() != conv_output_shape(input, layer)) {
    throw ShapeError("conv gradient shape does not match output");
  }
  ConvGradients g{Tensor3(input.shape()), std::vector<double>(layer.weights.size(), 0.0),
                  std::vector<double>(layer.bias.size(), 0.0)};
  const int f = layer.filter_size;
  const int n_out = layer.out_channels;
  for (int y = 0; y < grad_out.height(); ++y) {
    for (int x = 0; x < grad_out.width(); ++x) {
      const auto go = grad_out.pixel(y, x);
      for (int co = 0; co < n_out; ++co) g.bias[static_cast<std::size_t>(co)] += go[static_cast<std::size_t>(co)];
      for (int dy = 0; dy < f; ++dy) {
        for (int dx = 0; dx < f; ++dx) {
          const auto in = input.pixel(y + dy, x + dx);
          auto gin = g.input.pixel(y + dy, x + dx);
          for (int ci = 0; ci < layer.in_channels; ++ci) {
            const std::size_t base = layer.weight_index(dy, dx, ci, 0);
            const double* w = layer.weights.data() + base;
            double* gw = g.weights.data() + base;
            const double v = in[static_cast<std::size_t>(ci)];
            double s = 0.0;
            for (int co = 0; co < n_out; ++co) {
              gw[co] += v * go[static_cast<std::size_t>(co)];
              s += w[co] * go[static_cast<std::size_t>(co)];
            }
            gin[static_cast<std::size_t>(ci)] += s;
          }
        }
      }
    }
  }
  return g;
}

PoolResult fmp_forward(const Tensor3& input, const RegionGrid& grid) {
  if (grid.in_height() != input.height() || grid.in_width() != input.width()) {
    throw ShapeError("pooling grid does not match input size");
  }
  const int channels = input.channels();
  Tensor3 out(grid.out_height(), grid.out_width(), channels);
  std::vector<std::size_t> argmax(out.size());
  const auto in = input.values();
  for (int i = 0; i < grid.out_height(); ++i) {
    const Span1 rs = grid.row_span(i);
    for (int j = 0; j < grid.out_width(); ++j) {
      const Span1 cs = grid.col_span(j);
      const std::size_t o = out.index(i, j, 0);
      for (int c = 0; c < channels; ++c) {
        std::size_t best = input.index(rs.lo - 1, cs.lo - 1, c);
        for (int r = rs.lo - 1; r < rs.hi; ++r) {
          for (int k = cs.lo - 1; k < cs.hi; ++k) {
            const std::size_t idx = input.index(r, k, c);
            if (in[idx] > in[best]) best = idx;
          }
        }
        out.values()[o + static_cast<std::size_t>(c)] = in[best];
        argmax[o + static_cast<std::size_t>(c)] = best;
      }
    }
  }
  return {std::move(out), PoolArtifacts{grid, std::move(argmax)}};
}

Tensor3 fmp_backward(const PoolArtifacts& artifacts, const Tensor3& grad_out, Shape3 input_shape) {
  const RegionGrid& grid = artifacts.grid;
  if (grad_out.height() != grid.out_height() || grad_out.width() != grid.out_width() ||
      grad_out.size() != artifacts.argmax.size()) {
    throw ShapeError("pooling gradient does not match pooled output");
  }
  if (input_shape.height != grid.in_height() || input_shape.width != grid.in_width() ||
      input_shape.channels != grad_out.channels()) {
    throw ShapeError("pooling input shape does not match grid");
  }
  Tensor3 grad_in(input_shape);
  const auto go = grad_out.values();
  auto gi = grad_in.values();
  for (std::size_t k = 0; k < go.size(); ++k) gi[artifacts.argmax[k]] += go[k];
  return grad_in;
}

MaxPool2Result max_pool2_forward(const Tensor3& input) {
  if (input.height() % 2 != 0 || input.width() % 2 != 0) {
    throw ShapeError("2x2 max-pooling needs even input dimensions");
  }
  Tensor3 out(input.height() / 2, input.width() / 2, input.channels());
  std::vector<std::size_t> argmax(out.size());
  for (int i = 0; i < out.height(); ++i) {
    for (int j = 0; j < out.width(); ++j) {
      for (int c = 0; c < out.channels(); ++c) {
        const std::size_t cand[4] = {input.index(2 * i, 2 * j, c), input.index(2 * i, 2 * j + 1, c),
                                     input.index(2 * i + 1, 2 * j, c),
                                     input.index(2 * i + 1, 2 * j + 1, c)};
        std::size_t best = cand[0];
        for (std::size_t idx : cand) {
          if (input.values()[idx] > input.values()[best]) best = idx;
        }
        out.at(i, j, c) = input.values()[best];
        argmax[out.index(i, j, c)] = best;
      }
    }
  }
  return {std::move(out), std::move(argmax)};
}

Tensor3 max_pool2_backward(std::span<const std::size_t> argmax, const Tensor3& grad_out,
                           Shape3 input_shape) {
  if (input_shape.height != 2 * grad_out.height() || input_shape.width != 2 * grad_out.width() ||
      input_shape.channels != grad_out.channels() || argmax.size() != grad_out.size()) {
    throw ShapeError("2x2 max-pooling gradient shape mismatch");
  }
  Tensor3 grad_in(input_shape);
  for (std::size_t k = 0; k < argmax.size(); ++k) grad_in.values()[argmax[k]] += grad_out.values()[k];
  return grad_in;
}

Tensor3 avg_pool_regions(const Tensor3& input, const RegionGrid& grid) {
  if (grid.mode() != RegionMode::kDisjoint) throw ShapeError("average pooling needs a disjoint grid");
  if (grid.in_height() != input.height() || grid.in_width() != input.width()) {
    throw ShapeError("pooling grid does not match input size");
  }
  Tensor3 out(grid.out_height(), grid.out_width(), input.channels());
  for (int i = 0; i < grid.out_height(); ++i) {
    for (int j = 0; j < grid.out_width(); ++j) {
      const Rect rect = grid.region(i, j);
      auto acc = out.pixel(i, j);
      for (int r = rect.row_lo - 1; r < rect.row_hi; ++r) {
        for (int k = rect.col_lo - 1; k < rect.col_hi; ++k) {
          const auto px = input.pixel(r, k);
          for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += px[c];
        }
      }
      const double inv = 1.0 / rect.area();
      for (double& v : acc) v *= inv;
    }
  }
  return out;
}

Tensor3 leaky_relu(const Tensor3& input, double slope) {
  Tensor3 out = input;
  for (double& v : out.values()) {
    if (v < 0.0) v *= slope;
  }
  return out;
}

Tensor3 leaky_relu_backward(const Tensor3& input, const Tensor3& grad_out, double slope) {
  if (input.shape() != grad_out.shape()) throw ShapeError("leaky relu gradient shape mismatch");
  Tensor3 g = grad_out;
  const auto in = input.values();
  auto gv = g.values();
  for (std::size_t k = 0; k < gv.size(); ++k) {
    if (in[k] < 0.0) gv[k] *= slope;
  }
  return g;
}

std::vector<double> dropout_schedule(int n_hidden_layers, double max_rate) {
  if (n_hidden_layers < 1) throw InvalidParameterError("dropout schedule needs at least one layer");
  std::vector<double> rates(static_cast<std::size_t>(n_hidden_layers), 0.0);
  for (int l = 1; l < n_hidden_layers; ++l) {
    rates[static_cast<std::size_t>(l)] = max_rate * l / (n_hidden_layers - 1);
  }
  return rates;
}

std::vector<double> dropout_mask(std::size_t size, double rate, Rng& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) throw InvalidParameterError("dropout rate must lie in [0, 1)");
  std::vector<double> mask(size, 1.0);
  if (rate == 0.0) return mask;
  const double keep_scale = 1.0 / (1.0 - rate);
  for (double& m : mask) m = rng.uniform() < rate ? 0.0 : keep_scale;
  return mask;
}

void apply_mask(Tensor3& tensor, std::span<const double> mask) {
  if (mask.size() != tensor.size()) throw ShapeError("dropout mask size mismatch");
  auto v = tensor.values();
  for (std::size_t k = 0; k < v.size(); ++k) v[k] *= mask[k];
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> p(logits.begin(), logits.end());
  if (p.empty()) return p;
  const double m = *std::max_element(p.begin(), p.end());
  double z = 0.0;
  for (double& v : p) {
    v = std::exp(v - m);
    z += v;
  }
  for (double& v : p) v /= z;
  return p;
}

LossResult softmax_xent(std::span<const double> logits, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= logits.size()) {
    throw InvalidParameterError("label " + std::to_string(label) + " out of range");
  }
  const double m = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double v : logits) z += std::exp(v - m);
  const double log_z = m + std::log(z);
  LossResult r{log_z - logits[static_cast<std::size_t>(label)], std::vector<double>(logits.size())};
  for (std::size_t k = 0; k < logits.size(); ++k) r.grad_logits[k] = std::exp(logits[k] - log_z);
  r.grad_logits[static_cast<std::size_t>(label)] -= 1.0;
  return r;
}

}  // namespace fmp
