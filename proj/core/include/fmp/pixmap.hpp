#pragma once

#include <filesystem>
#include <iosfwd>

#include "fmp/tensor.hpp"

namespace fmp {

/// Binary P6 pixmap as an H x W x 3 tensor with values in [0, maxval]
/// rescaled to [0, 255].
Tensor3 read_ppm(std::istream& in);
Tensor3 read_ppm(const std::filesystem::path& path);

/// Writes 8-bit P6; values are rounded and clamped to [0, 255]. Single
/// channel tensors are written as gray.
void write_ppm(const Tensor3& image, std::ostream& out);
void write_ppm(const Tensor3& image, const std::filesystem::path& path);

}  // namespace fmp
