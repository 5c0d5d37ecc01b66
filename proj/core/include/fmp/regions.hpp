#pragma once

// Pooling-region generation for fractional max-pooling.
//
// One axis of a pooling layer is described by an increasing boundary
// sequence a_0 = 1 < a_1 < ... < a_{n_out} = n_in + 1 whose increments are
// 1 or 2 (n_out <= n_in <= 2 n_out) or 2 or 3 (2 n_out < n_in <= 3 n_out).
// A grid of regions is the product of a row sequence and a column sequence.
// All coordinates in this header are 1-based and inclusive.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fmp/random.hpp"

namespace fmp {

enum class RegionMode { kDisjoint, kOverlapping };
enum class SequenceKind { kRandom, kPseudorandom };

std::string to_string(RegionMode mode);
std::string to_string(SequenceKind kind);

/// The two increment values allowed for a given (n_in, n_out), or throws
/// InvalidRatioError when the ratio is outside both admissible ranges.
struct IncrementRange {
  int small;
  int large;
};
IncrementRange increment_range(int n_in, int n_out);
bool is_admissible(int n_in, int n_out);

class PoolingSequence {
 public:
  /// Validates every invariant; throws InvalidRatioError / InvalidParameterError.
  static PoolingSequence from_bounds(int n_in, std::vector<int> bounds);
  static PoolingSequence from_increments(int n_in, std::span<const int> increments);

  int n_in() const { return n_in_; }
  int n_out() const { return static_cast<int>(bounds_.size()) - 1; }
  std::span<const int> bounds() const { return bounds_; }
  std::vector<int> increments() const;
  /// Increments as a digit string, e.g. "211112112211112122".
  std::string increment_string() const;

  friend bool operator==(const PoolingSequence&, const PoolingSequence&) = default;

 private:
  PoolingSequence(int n_in, std::vector<int> bounds) : n_in_(n_in), bounds_(std::move(bounds)) {}

  int n_in_;
  std::vector<int> bounds_;
};

/// Increments are a uniformly random permutation of the forced multiset.
PoolingSequence random_sequence(int n_in, int n_out, Rng& rng);

/// bounds[i] = c_i - c_0 + 1 with c_i = ceil((n_in / n_out) * (i + u)), evaluated
/// in exact integer arithmetic up to the fractional part so that the increments
/// always sum to n_in. Requires 0 < u < 1.
PoolingSequence pseudorandom_sequence(int n_in, int n_out, double u);

struct Span1 {
  int lo;
  int hi;
  int length() const { return hi - lo + 1; }
  friend bool operator==(const Span1&, const Span1&) = default;
};

struct Rect {
  int row_lo;
  int row_hi;
  int col_lo;
  int col_hi;
  int area() const { return (row_hi - row_lo + 1) * (col_hi - col_lo + 1); }
  friend bool operator==(const Rect&, const Rect&) = default;
};

class RegionGrid {
 public:
  RegionGrid(PoolingSequence rows, PoolingSequence cols, RegionMode mode);

  const PoolingSequence& rows() const { return rows_; }
  const PoolingSequence& cols() const { return cols_; }
  RegionMode mode() const { return mode_; }

  int in_height() const { return rows_.n_in(); }
  int in_width() const { return cols_.n_in(); }
  int out_height() const { return rows_.n_out(); }
  int out_width() const { return cols_.n_out(); }

  /// Row/column extent of output index i / j (0-based index, 1-based span).
  Span1 row_span(int i) const { return row_spans_[static_cast<std::size_t>(i)]; }
  Span1 col_span(int j) const { return col_spans_[static_cast<std::size_t>(j)]; }
  Rect region(int i, int j) const;

 private:
  PoolingSequence rows_;
  PoolingSequence cols_;
  RegionMode mode_;
  std::vector<Span1> row_spans_;
  std::vector<Span1> col_spans_;
};

/// Disjoint: [a_{i-1}, a_i - 1]. Overlapping: [a_{i-1}, min(a_i, n_in)].
RegionGrid build_regions(PoolingSequence rows, PoolingSequence cols, RegionMode mode);

/// Square grid with independently drawn row and column sequences (and
/// independent u values in the pseudorandom case).
RegionGrid sample_region_grid(int n_in, int n_out, SequenceKind kind, RegionMode mode, Rng& rng);

/// Rectangular variant used by the image distortion demo.
RegionGrid sample_region_grid(int in_height, int in_width, int out_height, int out_width,
                              SequenceKind kind, RegionMode mode, Rng& rng);

}  // namespace fmp
