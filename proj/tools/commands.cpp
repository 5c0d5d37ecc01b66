#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "fmp/checkpoint.hpp"
#include "fmp/dataset.hpp"
#include "fmp/distort.hpp"
#include "fmp/error.hpp"
#include "fmp/netspec.hpp"
#include "fmp/pixmap.hpp"

namespace fmp::cli {

namespace {

Dataset load_split(const std::string& dir, const std::string& prefix, std::size_t limit) {
  Dataset d = load_idx_dir(dir, prefix);
  return limit > 0 ? d.head(limit) : d;
}

std::string filters_column(const LayerSpec& layer) {
  if (const auto* c = std::get_if<ConvSpec>(&layer)) return std::to_string(c->filters);
  return "-";
}

}  // namespace

int cmd_sizes(const std::string& spec_text, std::ostream& out, std::ostream& err) {
  NetworkSpec spec;
  try {
    spec = parse_and_size(spec_text);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n" << spec_text << "\n" << std::string(e.position(), ' ') << "^\n";
    return 2;
  }
  out << std::left << std::setw(28) << "layer" << std::right << std::setw(6) << "size" << std::setw(9)
      << "filters" << "\n";
  for (std::size_t k = spec.layers.size(); k-- > 0;) {
    out << std::left << std::setw(28) << layer_text(spec.layers[k]) << std::right << std::setw(6)
        << spec.spatial_sizes[k] << std::setw(9) << filters_column(spec.layers[k]) << "\n";
  }
  out << std::left << std::setw(28) << "input" << std::right << std::setw(6) << spec.input_size()
      << std::setw(9) << "-" << "\n";
  return 0;
}

int cmd_train(const TrainOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const Dataset train_set = load_split(options.data_dir, "train", options.train_limit);
    std::optional<Dataset> test_set;
    if (std::filesystem::exists(std::filesystem::path(options.data_dir) / "t10k-images-idx3-ubyte")) {
      test_set = load_split(options.data_dir, "t10k", options.test_limit);
    }
    std::ofstream metrics_file;
    if (!options.metrics_path.empty()) {
      metrics_file.open(options.metrics_path);
      if (!metrics_file) throw FormatError("cannot open " + options.metrics_path);
    }
    const MetricsSink sink = [&](const EpochMetrics& m) {
      const std::string line = format_metrics(m);
      out << line << "\n" << std::flush;
      if (metrics_file.is_open()) metrics_file << line << "\n" << std::flush;
    };

    Checkpoint checkpoint =
        options.resume_path.empty()
            ? init_checkpoint(options.config, train_set.images.empty() ? 1 : train_set.images[0].channels(),
                              std::max(train_set.class_count, 2))
            : load_checkpoint(std::filesystem::path(options.resume_path));
    train_epochs(checkpoint, options.config, train_set, test_set ? &*test_set : nullptr, options.config.epochs,
                 sink);
    if (!options.out_path.empty()) save_checkpoint(checkpoint, std::filesystem::path(options.out_path));
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_eval(const EvalOptions& options, std::ostream& out, std::ostream& err) {
  try {
    if (options.repeats < 1) throw InvalidParameterError("--repeats must be at least 1");
    const Checkpoint checkpoint = load_checkpoint(std::filesystem::path(options.checkpoint_path));
    const Dataset test_set = load_split(options.data_dir, "t10k", options.test_limit);
    const double single = evaluate(checkpoint.network, test_set, 1, options.seed);
    out << std::fixed << std::setprecision(2);
    out << "error (1 test): " << 100.0 * single << "%\n";
    if (options.repeats > 1) {
      const double voted = evaluate(checkpoint.network, test_set, options.repeats, options.seed);
      out << "error (" << options.repeats << " tests): " << 100.0 * voted << "%\n";
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_distort(const DistortOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const double alpha = parse_alpha(options.alpha).value();
    const Tensor3 image = read_ppm(std::filesystem::path(options.in_path));
    Rng rng(options.seed);
    const auto result = distort(image, alpha, options.layers, options.kind, rng);
    write_ppm(result.image, std::filesystem::path(options.out_path));
    out << image.width() << "x" << image.height() << " -> " << result.image.width() << "x"
        << result.image.height() << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_regions(const RegionsOptions& options, std::ostream& out, std::ostream& err) {
  try {
    Rng rng(options.seed);
    const auto grid = sample_region_grid(options.n_in, options.n_out, options.kind, options.mode, rng);
    write_ppm(render_regions(grid, options.scale), std::filesystem::path(options.out_path));
    out << "rows " << grid.rows().increment_string() << "\ncols " << grid.cols().increment_string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace fmp::cli
