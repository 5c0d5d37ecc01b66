#pragma once

// Subcommand bodies for the fmp tool. Each returns a process exit code and
// writes diagnostics to `err`.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "fmp/regions.hpp"
#include "fmp/trainer.hpp"

namespace fmp::cli {

int cmd_sizes(const std::string& spec_text, std::ostream& out, std::ostream& err);

struct TrainOptions {
  TrainConfig config;
  std::string data_dir;
  std::string out_path;
  std::string metrics_path;
  std::string resume_path;
  std::size_t train_limit = 0;  // 0 = all
  std::size_t test_limit = 0;
};
int cmd_train(const TrainOptions& options, std::ostream& out, std::ostream& err);

struct EvalOptions {
  std::string checkpoint_path;
  std::string data_dir;
  int repeats = 12;
  std::uint64_t seed = 1;
  std::size_t test_limit = 0;
};
int cmd_eval(const EvalOptions& options, std::ostream& out, std::ostream& err);

struct DistortOptions {
  std::string in_path;
  std::string out_path;
  std::string alpha = "2^1/2";
  int layers = 6;
  SequenceKind kind = SequenceKind::kRandom;
  std::uint64_t seed = 1;
};
int cmd_distort(const DistortOptions& options, std::ostream& out, std::ostream& err);

struct RegionsOptions {
  int n_in = 36;
  int n_out = 25;
  SequenceKind kind = SequenceKind::kPseudorandom;
  RegionMode mode = RegionMode::kDisjoint;
  std::uint64_t seed = 1;
  int scale = 8;
  std::string out_path;
};
int cmd_regions(const RegionsOptions& options, std::ostream& out, std::ostream& err);

}  // namespace fmp::cli
