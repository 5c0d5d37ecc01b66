#pragma once

// Checkpoint container. All integers and floats are little-endian.
//
//   offset  size      field
//   0       8         magic "FMPCKPT1"
//   8       8         u64 L, length of the canonical spec text
//   16      L         spec text (ASCII, format_spec output)
//           4         u32 input channels
//           4         u32 class count
//           8         f64 leaky slope
//           8         u64 B, parameter block count
//           B x ...   per block: u64 n, then n x f64 (weights, bias of each
//                     convolution in layer order, output layer last)
//           8         u64 epoch
//           8         f64 current learning rate
//           8         u64 V, momentum block count (0 or B)
//           V x ...   per block: u64 n, then n x f64
//           8         u64 R, length of the random engine state
//           R         engine state (ASCII, std::mt19937_64 stream format)

#include <filesystem>
#include <iosfwd>

#include "fmp/trainer.hpp"

namespace fmp {

void save_checkpoint(const Checkpoint& checkpoint, std::ostream& out);
void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);

/// Throws FormatError on bad magic, truncation, or block-size mismatch.
Checkpoint load_checkpoint(std::istream& in);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace fmp
