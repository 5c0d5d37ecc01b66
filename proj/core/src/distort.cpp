#include "fmp/distort.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fmp/error.hpp"
#include "fmp/layers.hpp"

namespace fmp {

int downscale_size(int n, double alpha) { return static_cast<int>(std::floor(n / alpha + 0.5)); }

DistortResult distort(const Tensor3& image, double alpha, int layers, SequenceKind kind, Rng& rng) {
  if (!(alpha > 1.0 && alpha <= 2.0)) throw InvalidParameterError("distortion alpha must lie in (1, 2]");
  if (layers < 1) throw InvalidParameterError("distortion needs at least one layer");
  DistortResult result{image, {}};
  for (int l = 0; l < layers; ++l) {
    const int h = result.image.height();
    const int w = result.image.width();
    const int out_h = downscale_size(h, alpha);
    const int out_w = downscale_size(w, alpha);
    if (out_h < 1 || out_w < 1) {
      throw InvalidParameterError("image side drops below 1 at layer " + std::to_string(l + 1));
    }
    auto grid = sample_region_grid(h, w, out_h, out_w, kind, RegionMode::kDisjoint, rng);
    result.image = avg_pool_regions(result.image, grid);
    result.grids.push_back(std::move(grid));
  }
  return result;
}

namespace {

template <typename SpanOf>
std::vector<Span1> trace_spans(const std::vector<RegionGrid>& grids, SpanOf span_of, int out_size) {
  std::vector<Span1> spans(static_cast<std::size_t>(out_size));
  for (int k = 0; k < out_size; ++k) {
    Span1 s = span_of(grids.back(), k);
    for (std::size_t l = grids.size() - 1; l-- > 0;) {
      s = {span_of(grids[l], s.lo - 1).lo, span_of(grids[l], s.hi - 1).hi};
    }
    spans[static_cast<std::size_t>(k)] = s;
  }
  return spans;
}

}  // namespace

std::vector<Span1> trace_row_spans(const std::vector<RegionGrid>& grids) {
  if (grids.empty()) return {};
  return trace_spans(grids, [](const RegionGrid& g, int i) { return g.row_span(i); }, grids.back().out_height());
}

std::vector<Span1> trace_col_spans(const std::vector<RegionGrid>& grids) {
  if (grids.empty()) return {};
  return trace_spans(grids, [](const RegionGrid& g, int j) { return g.col_span(j); }, grids.back().out_width());
}

bool spans_monotone(const std::vector<Span1>& spans, int source_size) {
  int next = 1;
  for (const auto& s : spans) {
    if (s.lo != next || s.hi < s.lo) return false;
    next = s.hi + 1;
  }
  return next == source_size + 1;
}

double max_displacement(const std::vector<Span1>& spans, int source_size) {
  const double scale = static_cast<double>(source_size) / static_cast<double>(spans.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < spans.size(); ++k) {
    const double center = 0.5 * (spans[k].lo - 1 + spans[k].hi);
    const double ideal = (static_cast<double>(k) + 0.5) * scale;
    worst = std::max(worst, std::abs(center - ideal));
  }
  return worst;
}

namespace {

void region_color(int i, int j, double rgb[3]) {
  const std::uint64_t h = mix_seed(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j));
  for (int c = 0; c < 3; ++c) rgb[c] = 64.0 + static_cast<double>((h >> (16 * c)) % 192);
}

}  // namespace

Tensor3 render_regions(const RegionGrid& grid, int scale) {
  if (scale < 1) throw InvalidParameterError("render scale must be at least 1");
  Tensor3 img(grid.in_height() * scale, grid.in_width() * scale, 3,
              grid.mode() == RegionMode::kDisjoint ? 0.0 : 255.0);
  for (int i = 0; i < grid.out_height(); ++i) {
    for (int j = 0; j < grid.out_width(); ++j) {
      const Rect r = grid.region(i, j);
      double rgb[3];
      region_color(i, j, rgb);
      const int y0 = (r.row_lo - 1) * scale;
      const int y1 = r.row_hi * scale - 1;
      const int x0 = (r.col_lo - 1) * scale;
      const int x1 = r.col_hi * scale - 1;
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          const bool edge = y == y0 || y == y1 || x == x0 || x == x1;
          if (grid.mode() == RegionMode::kOverlapping && !edge) continue;
          for (int c = 0; c < 3; ++c) img.at(y, x, c) = rgb[c];
        }
      }
    }
  }
  return img;
}

}  // namespace fmp
