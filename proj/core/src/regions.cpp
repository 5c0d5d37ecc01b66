#include "fmp/regions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "fmp/error.hpp"

namespace fmp {

std::string to_string(RegionMode mode) {
  return mode == RegionMode::kDisjoint ? "disjoint" : "overlap";
}

std::string to_string(SequenceKind kind) {
  return kind == SequenceKind::kRandom ? "random" : "pseudo";
}

bool is_admissible(int n_in, int n_out) {
  return n_out >= 1 && n_out <= n_in && n_in <= 3 * n_out;
}

IncrementRange increment_range(int n_in, int n_out) {
  if (!is_admissible(n_in, n_out)) {
    throw InvalidRatioError("pooling ratio " + std::to_string(n_in) + "/" + std::to_string(n_out) +
                            " outside [1, 3]");
  }
  // n_in == 2 n_out belongs to the ones-and-twos range (plain MP2).
  if (n_in <= 2 * n_out) return {1, 2};
  return {2, 3};
}

PoolingSequence PoolingSequence::from_bounds(int n_in, std::vector<int> bounds) {
  if (bounds.size() < 2) throw InvalidParameterError("pooling sequence needs n_out >= 1");
  const int n_out = static_cast<int>(bounds.size()) - 1;
  const auto range = increment_range(n_in, n_out);
  if (bounds.front() != 1 || bounds.back() != n_in + 1) {
    throw InvalidParameterError("pooling sequence must run from 1 to n_in + 1");
  }
  for (std::size_t i = 1; i < bounds.size(); ++i) {
    const int step = bounds[i] - bounds[i - 1];
    if (step != range.small && step != range.large) {
      throw InvalidParameterError("pooling increment " + std::to_string(step) + " not in {" +
                                  std::to_string(range.small) + ", " +
                                  std::to_string(range.large) + "}");
    }
  }
  return PoolingSequence(n_in, std::move(bounds));
}

PoolingSequence PoolingSequence::from_increments(int n_in, std::span<const int> increments) {
  std::vector<int> bounds(increments.size() + 1);
  bounds[0] = 1;
  for (std::size_t i = 0; i < increments.size(); ++i) bounds[i + 1] = bounds[i] + increments[i];
  return from_bounds(n_in, std::move(bounds));
}

std::vector<int> PoolingSequence::increments() const {
  std::vector<int> out(bounds_.size() - 1);
  for (std::size_t i = 0; i + 1 < bounds_.size(); ++i) out[i] = bounds_[i + 1] - bounds_[i];
  return out;
}

std::string PoolingSequence::increment_string() const {
  std::string s;
  for (int step : increments()) s.push_back(static_cast<char>('0' + step));
  return s;
}

PoolingSequence random_sequence(int n_in, int n_out, Rng& rng) {
  const auto range = increment_range(n_in, n_out);
  const int n_large = n_in - range.small * n_out;
  std::vector<int> steps(static_cast<std::size_t>(n_out), range.small);
  std::fill(steps.begin(), steps.begin() + n_large, range.large);
  // Fisher-Yates on the portable draw procedure (std::shuffle is unspecified).
  for (std::size_t i = steps.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(steps[i - 1], steps[j]);
  }
  return PoolingSequence::from_increments(n_in, steps);
}

PoolingSequence pseudorandom_sequence(int n_in, int n_out, double u) {
  increment_range(n_in, n_out);
  if (!(u > 0.0 && u < 1.0)) {
    throw InvalidParameterError("pseudorandom offset u must lie in (0, 1)");
  }
  // alpha (i + u) = q + (r + n_in u) / n_out with q, r the integer quotient and
  // remainder of n_in i / n_out; only the fractional part touches floating point.
  const auto ceil_at = [&](int i) {
    const std::int64_t numer = static_cast<std::int64_t>(n_in) * i;
    const std::int64_t q = numer / n_out;
    const std::int64_t r = numer % n_out;
    const double frac = (static_cast<double>(r) + static_cast<double>(n_in) * u) / n_out;
    return q + static_cast<std::int64_t>(std::ceil(frac));
  };
  const std::int64_t c0 = ceil_at(0);
  std::vector<int> bounds(static_cast<std::size_t>(n_out) + 1);
  for (int i = 0; i <= n_out; ++i) bounds[static_cast<std::size_t>(i)] = static_cast<int>(ceil_at(i) - c0 + 1);
  return PoolingSequence::from_bounds(n_in, std::move(bounds));
}

namespace {

std::vector<Span1> axis_spans(const PoolingSequence& seq, RegionMode mode) {
  const auto b = seq.bounds();
  std::vector<Span1> spans(static_cast<std::size_t>(seq.n_out()));
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const int hi = mode == RegionMode::kDisjoint ? b[i + 1] - 1 : std::min(b[i + 1], seq.n_in());
    spans[i] = {b[i], hi};
  }
  return spans;
}

PoolingSequence draw_sequence(int n_in, int n_out, SequenceKind kind, Rng& rng) {
  if (kind == SequenceKind::kRandom) return random_sequence(n_in, n_out, rng);
  return pseudorandom_sequence(n_in, n_out, rng.uniform_open());
}

}  // namespace

RegionGrid::RegionGrid(PoolingSequence rows, PoolingSequence cols, RegionMode mode)
    : rows_(std::move(rows)),
      cols_(std::move(cols)),
      mode_(mode),
      row_spans_(axis_spans(rows_, mode)),
      col_spans_(axis_spans(cols_, mode)) {}

Rect RegionGrid::region(int i, int j) const {
  const Span1 r = row_span(i);
  const Span1 c = col_span(j);
  return {r.lo, r.hi, c.lo, c.hi};
}

RegionGrid build_regions(PoolingSequence rows, PoolingSequence cols, RegionMode mode) {
  return RegionGrid(std::move(rows), std::move(cols), mode);
}

RegionGrid sample_region_grid(int n_in, int n_out, SequenceKind kind, RegionMode mode, Rng& rng) {
  return sample_region_grid(n_in, n_in, n_out, n_out, kind, mode, rng);
}

RegionGrid sample_region_grid(int in_height, int in_width, int out_height, int out_width,
                              SequenceKind kind, RegionMode mode, Rng& rng) {
  auto rows = draw_sequence(in_height, out_height, kind, rng);
  auto cols = draw_sequence(in_width, out_width, kind, rng);
  return build_regions(std::move(rows), std::move(cols), mode);
}

}  // namespace fmp
