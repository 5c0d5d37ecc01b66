#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "fmp/tensor.hpp"

namespace fmp {

struct Dataset {
  std::vector<Tensor3> images;
  std::vector<int> labels;
  int class_count = 0;

  std::size_t size() const { return images.size(); }
  /// Checks equal lengths and label range; throws InvalidParameterError.
  void validate() const;
  /// First `n` samples (or all, when n exceeds the size).
  Dataset head(std::size_t n) const;
};

/// Reads an IDX image file (magic 0x00000803) and label file (0x00000801).
/// Pixels are scaled to [0, 1]; class_count is max label + 1.
Dataset load_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path);

/// Writes raw 8-bit IDX files; pixels are expected in [0, 1].
void write_idx(const Dataset& data, const std::filesystem::path& images_path,
               const std::filesystem::path& labels_path);

/// Loads <dir>/<prefix>-images-idx3-ubyte and <dir>/<prefix>-labels-idx1-ubyte
/// (prefix "train" or "t10k", the MNIST naming).
Dataset load_idx_dir(const std::filesystem::path& dir, const std::string& prefix);

/// Centers `image` in an input_size x input_size zero canvas; when the
/// border is odd the extra cell goes to the bottom/right.
Tensor3 pad_to_input(const Tensor3& image, int input_size);

}  // namespace fmp
