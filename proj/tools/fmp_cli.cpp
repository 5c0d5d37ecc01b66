#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace fmp;
  CLI::App app{"Fractional max-pooling toolkit"};
  app.require_subcommand(1);

  const std::map<std::string, SequenceKind> kinds{{"random", SequenceKind::kRandom},
                                                  {"pseudo", SequenceKind::kPseudorandom}};
  const std::map<std::string, RegionMode> modes{{"disjoint", RegionMode::kDisjoint},
                                                {"overlap", RegionMode::kOverlapping}};

  std::string sizes_spec;
  auto* sizes = app.add_subcommand("sizes", "Print the layer size chain of a network");
  sizes->add_option("--spec", sizes_spec, "Network shorthand")->required();

  cli::TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Train a network on IDX data");
  train_cmd->add_option("--spec", train.config.spec_text, "Network shorthand")->capture_default_str();
  train_cmd->add_option("--data", train.data_dir, "Directory with MNIST-named IDX files")->required()->check(
      CLI::ExistingDirectory);
  train_cmd->add_option("--epochs", train.config.epochs)->capture_default_str();
  train_cmd->add_option("--lr", train.config.learning_rate)->capture_default_str();
  train_cmd->add_option("--lr-decay", train.config.lr_decay)->capture_default_str();
  train_cmd->add_option("--momentum", train.config.momentum)->capture_default_str();
  train_cmd->add_option("--batch", train.config.batch_size)->capture_default_str();
  train_cmd->add_option("--dropout", train.config.dropout_max, "Dropout rate of the last hidden layer")
      ->capture_default_str();
  train_cmd->add_option("--slope", train.config.leaky_slope, "Leaky rectifier slope")->capture_default_str();
  train_cmd->add_option("--seed", train.config.seed)->capture_default_str();
  train_cmd->add_option("--mode", train.config.region_mode, "Default FMP mode")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  train_cmd->add_option("--kind", train.config.region_kind, "Default FMP sequence kind")
      ->transform(CLI::CheckedTransformer(kinds, CLI::ignore_case));
  train_cmd->add_flag("--per-sample-regions", train.config.per_sample_regions);
  train_cmd->add_option("--train-limit", train.train_limit, "Use only the first N training samples");
  train_cmd->add_option("--test-limit", train.test_limit, "Use only the first N test samples");
  train_cmd->add_option("--metrics", train.metrics_path, "Write the per-epoch metrics stream here");
  train_cmd->add_option("--resume", train.resume_path, "Continue from a checkpoint")->check(CLI::ExistingFile);
  train_cmd->add_option("--out", train.out_path, "Checkpoint output path");

  cli::EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint with repeated testing");
  eval_cmd->add_option("--ckpt", eval.checkpoint_path)->required();
  eval_cmd->add_option("--data", eval.data_dir)->required();
  eval_cmd->add_option("--repeats", eval.repeats)->capture_default_str();
  eval_cmd->add_option("--seed", eval.seed)->capture_default_str();
  eval_cmd->add_option("--test-limit", eval.test_limit);

  cli::DistortOptions dist;
  auto* dist_cmd = app.add_subcommand("distort", "Iterated FMP average pooling of a P6 image");
  dist_cmd->add_option("--in", dist.in_path)->required();
  dist_cmd->add_option("--out", dist.out_path)->required();
  dist_cmd->add_option("--alpha", dist.alpha, "Pooling fraction, e.g. 2^1/2 or 1.5")->capture_default_str();
  dist_cmd->add_option("--layers", dist.layers)->capture_default_str();
  dist_cmd->add_option("--kind", dist.kind)->transform(CLI::CheckedTransformer(kinds, CLI::ignore_case));
  dist_cmd->add_option("--seed", dist.seed)->capture_default_str();

  cli::RegionsOptions reg;
  auto* reg_cmd = app.add_subcommand("regions", "Render a pooling-region grid as a P6 image");
  reg_cmd->add_option("--nin", reg.n_in)->required();
  reg_cmd->add_option("--nout", reg.n_out)->required();
  reg_cmd->add_option("--kind", reg.kind)->transform(CLI::CheckedTransformer(kinds, CLI::ignore_case));
  reg_cmd->add_option("--mode", reg.mode)->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  reg_cmd->add_option("--seed", reg.seed)->capture_default_str();
  reg_cmd->add_option("--scale", reg.scale, "Pixels per grid cell")->capture_default_str();
  reg_cmd->add_option("--out", reg.out_path)->required();

  CLI11_PARSE(app, argc, argv);

  if (sizes->parsed()) return cli::cmd_sizes(sizes_spec, std::cout, std::cerr);
  if (train_cmd->parsed()) return cli::cmd_train(train, std::cout, std::cerr);
  if (eval_cmd->parsed()) return cli::cmd_eval(eval, std::cout, std::cerr);
  if (dist_cmd->parsed()) return cli::cmd_distort(dist, std::cout, std::cerr);
  return cli::cmd_regions(reg, std::cout, std::cerr);
}
