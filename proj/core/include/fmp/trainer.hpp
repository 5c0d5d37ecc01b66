#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fmp/dataset.hpp"
#include "fmp/network.hpp"
#include "fmp/random.hpp"

namespace fmp {

struct TrainConfig {
  std::string spec_text = "(8nC2-FMP(2^1/2))x6-C2-C1-output";
  int epochs = 10;
  int batch_size = 8;
  double learning_rate = 0.01;
  /// Multiplicative learning-rate factor applied after every epoch.
  double lr_decay = 0.9;
  double momentum = 0.9;
  double dropout_max = 0.5;
  double leaky_slope = 1.0 / 3.0;
  std::uint64_t seed = 1;
  RegionMode region_mode = RegionMode::kOverlapping;
  SequenceKind region_kind = SequenceKind::kPseudorandom;
  /// Draw fresh pooling regions for every sample instead of every minibatch.
  bool per_sample_regions = false;

  void validate() const;
};

struct TrainState {
  int epoch = 0;
  double learning_rate = 0.0;
  /// Momentum buffers aligned with Network::block.
  std::vector<std::vector<double>> velocity;
  std::string rng_state;
};

struct Checkpoint {
  Network network;
  TrainState state;
};

struct EpochMetrics {
  int epoch;
  double train_loss;
  double train_error;
  /// NaN when no test set was supplied.
  double test_error;
};

/// "epoch,train_loss,train_error,test_error" with fixed precision.
std::string format_metrics(const EpochMetrics& m);

using MetricsSink = std::function<void(const EpochMetrics&)>;

/// Fresh network and optimizer state for `config`.
Checkpoint init_checkpoint(const TrainConfig& config, int in_channels, int class_count);

/// Runs epochs (checkpoint.state.epoch, until_epoch]. Resuming from a saved
/// checkpoint with the same config reproduces the uninterrupted run.
void train_epochs(Checkpoint& checkpoint, const TrainConfig& config, const Dataset& train_set,
                  const Dataset* test_set, int until_epoch, const MetricsSink& sink = {});

Checkpoint train(const TrainConfig& config, const Dataset& train_set, const Dataset* test_set = nullptr,
                 const MetricsSink& sink = {});

struct Prediction {
  int label;
  std::vector<double> scores;
};

/// One stochastic pass: fresh regions, no dropout. The image is zero-padded.
Prediction predict_once(const Network& network, const Tensor3& image, Rng& rng);

struct Vote {
  int label;
  std::vector<int> counts;
  std::vector<double> summed_scores;
};

/// Class with the most votes; ties go to the larger summed score, then the
/// lower class index.
int vote_winner(std::span<const int> counts, std::span<const double> summed_scores);

/// Majority vote over `repeats` passes, resolved by vote_winner.
Vote predict_vote(const Network& network, const Tensor3& image, int repeats, Rng& rng);

/// Misclassification rate under predict_vote. Sample n draws from
/// Rng(mix_seed(seed, n)), so results do not depend on evaluation order.
double evaluate(const Network& network, const Dataset& data, int repeats, std::uint64_t seed);

}  // namespace fmp
