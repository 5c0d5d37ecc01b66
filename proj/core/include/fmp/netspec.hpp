#pragma once

// Network shorthand, e.g. "(10nC2-FMP(2^1/2))x3-C2-C1-output".
//
//   spec  := item ('-' item)* '-' 'output' | 'output'
//   item  := group | layer
//   group := '(' layer ('-' layer)* ')' 'x' INT
//   layer := [INT ['n']] 'C' INT | 'FMP' '(' alpha ')' [':' mode ':' kind] | 'MP2'
//   alpha := INT '^' INT '/' INT | DECIMAL
//   mode  := 'disjoint' | 'overlap'
//   kind  := 'random' | 'pseudo'
//
// "kn" gives the l-th convolution (1-based, over the whole network) k*l
// filters; a bare "C" continues the most recent "kn" schedule.

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fmp/regions.hpp"

namespace fmp {

/// Pooling fraction kept in the form it was written: base^(num/den) or a decimal.
struct Alpha {
  enum class Form { kRadical, kDecimal };
  Form form = Form::kDecimal;
  int base = 0;
  int num = 0;
  int den = 1;
  double decimal = 0.0;

  static Alpha radical(int base, int num, int den) { return {Form::kRadical, base, num, den, 0.0}; }
  static Alpha from_decimal(double value) { return {Form::kDecimal, 0, 0, 1, value}; }

  double value() const;
  std::string to_string() const;
  friend bool operator==(const Alpha&, const Alpha&) = default;
};

struct ConvSpec {
  int filters;
  int filter_size;
  friend bool operator==(const ConvSpec&, const ConvSpec&) = default;
};

struct FmpSpec {
  Alpha alpha;
  RegionMode mode;
  SequenceKind kind;
  friend bool operator==(const FmpSpec&, const FmpSpec&) = default;
};

struct Mp2Spec {
  friend bool operator==(const Mp2Spec&, const Mp2Spec&) = default;
};

struct OutputSpec {
  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

using LayerSpec = std::variant<ConvSpec, FmpSpec, Mp2Spec, OutputSpec>;

std::string layer_text(const LayerSpec& layer);

struct NetworkSpec {
  /// Input side first; always ends with OutputSpec.
  std::vector<LayerSpec> layers;
  /// spatial_sizes[k] is the side length entering layers[k]; empty until sized.
  std::vector<int> spatial_sizes;

  bool sized() const { return spatial_sizes.size() == layers.size(); }
  int input_size() const { return spatial_sizes.at(0); }
  int n_hidden() const;

  /// Structural equality on the layer list only.
  friend bool operator==(const NetworkSpec& a, const NetworkSpec& b) { return a.layers == b.layers; }
};

struct ParseOptions {
  RegionMode default_mode = RegionMode::kOverlapping;
  SequenceKind default_kind = SequenceKind::kPseudorandom;
};

/// Throws ParseError on malformed text or out-of-range values.
NetworkSpec parse_spec(std::string_view text, const ParseOptions& options = {});

/// Parses a standalone pooling fraction ("2^1/2", "1.5"); no range check.
Alpha parse_alpha(std::string_view text);

/// Right-to-left from side 1: C_f adds f - 1, MP2 doubles, FMP multiplies by
/// alpha and rounds half up.
NetworkSpec compute_sizes(NetworkSpec spec);

NetworkSpec parse_and_size(std::string_view text, const ParseOptions& options = {});

/// Canonical text: fully expanded, explicit filter counts and FMP mode/kind.
std::string format_spec(const NetworkSpec& spec);

}  // namespace fmp
