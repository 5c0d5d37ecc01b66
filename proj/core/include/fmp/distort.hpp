#pragma once

// Iterated average pooling over disjoint FMP regions. Random sequences
// produce a visibly elastic distortion; pseudorandom ones a faithful rescale.

#include <vector>

#include "fmp/random.hpp"
#include "fmp/regions.hpp"
#include "fmp/tensor.hpp"

namespace fmp {

/// nearest_integer(n / alpha), halves rounded up.
int downscale_size(int n, double alpha);

struct DistortResult {
  Tensor3 image;
  /// One grid per pooling layer, first layer first.
  std::vector<RegionGrid> grids;
};

/// Requires alpha in (1, 2] and layers >= 1.
DistortResult distort(const Tensor3& image, double alpha, int layers, SequenceKind kind, Rng& rng);

/// Source-image row / column extent of every output row / column after
/// composing all layers.
std::vector<Span1> trace_row_spans(const std::vector<RegionGrid>& grids);
std::vector<Span1> trace_col_spans(const std::vector<RegionGrid>& grids);

/// True when the spans are nonempty, increasing, and tile [1, n] without
/// gaps or overlap (no fold-over).
bool spans_monotone(const std::vector<Span1>& spans, int source_size);

/// Largest distance between a span center and its position under an exact
/// uniform rescale, in source pixels.
double max_displacement(const std::vector<Span1>& spans, int source_size);

/// Region picture: disjoint grids get one flat color per region, overlapping
/// grids get each region outline drawn in its own color. Each input cell is
/// `scale` x `scale` pixels.
Tensor3 render_regions(const RegionGrid& grid, int scale);

}  // namespace fmp
