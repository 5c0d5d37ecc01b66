#include "fmp/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "fmp/error.hpp"

namespace fmp {

void TrainConfig::validate() const {
  if (epochs < 0) throw InvalidParameterError("epochs must be non-negative");
  if (batch_size < 1) throw InvalidParameterError("batch size must be at least 1");
  if (!(learning_rate > 0.0)) throw InvalidParameterError("learning rate must be positive");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw InvalidParameterError("momentum must lie in [0, 1)");
  if (!(lr_decay > 0.0 && lr_decay <= 1.0)) throw InvalidParameterError("lr decay must lie in (0, 1]");
  if (!(dropout_max >= 0.0 && dropout_max < 1.0)) throw InvalidParameterError("dropout must lie in [0, 1)");
}

std::string format_metrics(const EpochMetrics& m) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d,%.6f,%.6f,%.6f", m.epoch, m.train_loss, m.train_error, m.test_error);
  return buf;
}

Checkpoint init_checkpoint(const TrainConfig& config, int in_channels, int class_count) {
  config.validate();
  const ParseOptions options{config.region_mode, config.region_kind};
  Network network(parse_and_size(config.spec_text, options), in_channels, class_count, config.leaky_slope);
  Rng rng(config.seed);
  network.initialize(rng);
  TrainState state;
  state.learning_rate = config.learning_rate;
  for (std::size_t k = 0; k < network.block_count(); ++k) state.velocity.emplace_back(network.block(k).size(), 0.0);
  state.rng_state = rng.state();
  return {std::move(network), std::move(state)};
}

namespace {

int argmax(std::span<const double> v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

void train_epochs(Checkpoint& checkpoint, const TrainConfig& config, const Dataset& train_set,
                  const Dataset* test_set, int until_epoch, const MetricsSink& sink) {
  config.validate();
  train_set.validate();
  if (train_set.size() == 0) throw InvalidParameterError("training set is empty");
  Network& net = checkpoint.network;
  TrainState& state = checkpoint.state;
  if (state.velocity.size() != net.block_count()) throw InvalidParameterError("optimizer state does not match network");

  Rng rng;
  rng.set_state(state.rng_state);
  const std::vector<double> rates =
      config.dropout_max > 0.0 && net.n_hidden() > 0 ? dropout_schedule(net.n_hidden(), config.dropout_max)
                                                     : std::vector<double>{};

  std::vector<Tensor3> inputs;
  inputs.reserve(train_set.size());
  for (const auto& image : train_set.images) inputs.push_back(pad_to_input(image, net.input_size()));

  std::vector<std::size_t> order(train_set.size());
  auto grads = net.zero_gradients();
  for (int epoch = state.epoch + 1; epoch <= until_epoch; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

    double loss_sum = 0.0;
    std::size_t wrong = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      for (auto& g : grads.blocks) std::fill(g.begin(), g.end(), 0.0);
      RegionSet regions;
      if (!config.per_sample_regions) regions = net.sample_regions(rng);
      for (std::size_t b = start; b < end; ++b) {
        const std::size_t n = order[b];
        if (config.per_sample_regions) regions = net.sample_regions(rng);
        const auto result = net.accumulate_gradients(inputs[n], train_set.labels[n], regions, rates, rng, grads);
        if (!std::isfinite(result.loss)) {
          throw DivergenceError("non-finite training loss at epoch " + std::to_string(epoch) + ", sample " +
                                std::to_string(n));
        }
        loss_sum += result.loss;
        if (argmax(result.logits) != train_set.labels[n]) ++wrong;
      }
      const double step = state.learning_rate / static_cast<double>(end - start);
      for (std::size_t k = 0; k < net.block_count(); ++k) {
        auto params = net.block(k);
        auto& v = state.velocity[k];
        const auto& g = grads.blocks[k];
        for (std::size_t i = 0; i < params.size(); ++i) {
          v[i] = config.momentum * v[i] - step * g[i];
          params[i] += v[i];
        }
      }
    }

    state.epoch = epoch;
    state.learning_rate *= config.lr_decay;
    state.rng_state = rng.state();
    EpochMetrics m{epoch, loss_sum / static_cast<double>(order.size()),
                   static_cast<double>(wrong) / static_cast<double>(order.size()),
                   std::numeric_limits<double>::quiet_NaN()};
    if (test_set != nullptr && test_set->size() > 0) {
      m.test_error = evaluate(net, *test_set, 1, mix_seed(config.seed, static_cast<std::uint64_t>(epoch)));
    }
    if (sink) sink(m);
  }
}

Checkpoint train(const TrainConfig& config, const Dataset& train_set, const Dataset* test_set,
                 const MetricsSink& sink) {
  const int channels = train_set.images.empty() ? 1 : train_set.images.front().channels();
  Checkpoint checkpoint = init_checkpoint(config, channels, std::max(train_set.class_count, 2));
  train_epochs(checkpoint, config, train_set, test_set, config.epochs, sink);
  return checkpoint;
}

Prediction predict_once(const Network& network, const Tensor3& image, Rng& rng) {
  const Tensor3 input = pad_to_input(image, network.input_size());
  const RegionSet regions = network.sample_regions(rng);
  auto scores = softmax(network.logits(input, regions));
  const int label = argmax(scores);
  return {label, std::move(scores)};
}

int vote_winner(std::span<const int> counts, std::span<const double> summed_scores) {
  if (counts.empty() || counts.size() != summed_scores.size()) throw InvalidParameterError("malformed vote tally");
  std::size_t best = 0;
  for (std::size_t k = 1; k < counts.size(); ++k) {
    if (counts[k] > counts[best] || (counts[k] == counts[best] && summed_scores[k] > summed_scores[best])) best = k;
  }
  return static_cast<int>(best);
}

Vote predict_vote(const Network& network, const Tensor3& image, int repeats, Rng& rng) {
  if (repeats < 1) throw InvalidParameterError("repeats must be at least 1");
  const auto classes = static_cast<std::size_t>(network.class_count());
  Vote vote{0, std::vector<int>(classes, 0), std::vector<double>(classes, 0.0)};
  for (int r = 0; r < repeats; ++r) {
    const auto p = predict_once(network, image, rng);
    ++vote.counts[static_cast<std::size_t>(p.label)];
    for (std::size_t k = 0; k < classes; ++k) vote.summed_scores[k] += p.scores[k];
  }
  vote.label = vote_winner(vote.counts, vote.summed_scores);
  return vote;
}

double evaluate(const Network& network, const Dataset& data, int repeats, std::uint64_t seed) {
  if (repeats < 1) throw InvalidParameterError("repeats must be at least 1");
  if (data.size() == 0) return 0.0;
  std::size_t wrong = 0;
  for (std::size_t n = 0; n < data.size(); ++n) {
    Rng rng(mix_seed(seed, n));
    if (predict_vote(network, data.images[n], repeats, rng).label != data.labels[n]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(data.size());
}

}  // namespace fmp
