#include "fmp/netspec.hpp"

#include <charconv>
#include <cmath>
#include <optional>

#include "fmp/error.hpp"

namespace fmp {

double Alpha::value() const {
  if (form == Form::kDecimal) return decimal;
  return std::pow(static_cast<double>(base), static_cast<double>(num) / den);
}

std::string Alpha::to_string() const {
  if (form == Form::kRadical) {
    return std::to_string(base) + "^" + std::to_string(num) + "/" + std::to_string(den);
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, decimal);
  return std::string(buf, res.ptr);
}

std::string layer_text(const LayerSpec& layer) {
  struct Visitor {
    std::string operator()(const ConvSpec& c) const {
      return std::to_string(c.filters) + "C" + std::to_string(c.filter_size);
    }
    std::string operator()(const FmpSpec& f) const {
      return "FMP(" + f.alpha.to_string() + "):" + fmp::to_string(f.mode) + ":" + fmp::to_string(f.kind);
    }
    std::string operator()(const Mp2Spec&) const { return "MP2"; }
    std::string operator()(const OutputSpec&) const { return "output"; }
  };
  return std::visit(Visitor{}, layer);
}

int NetworkSpec::n_hidden() const {
  int n = 0;
  for (const auto& l : layers) n += std::holds_alternative<ConvSpec>(l) ? 1 : 0;
  return n;
}

namespace {

constexpr int kMaxNumber = 1000000;

// A convolution before filter counts are assigned.
struct RawConv {
  enum class Count { kExplicit, kLinear, kBare };
  Count count;
  int value;
  int filter_size;
  std::size_t position;
};

using RawLayer = std::variant<RawConv, FmpSpec, Mp2Spec>;

class Parser {
 public:
  Parser(std::string_view text, const ParseOptions& options) : text_(text), options_(options) {}

  Alpha parse_alpha_text() {
    Alpha alpha = parse_alpha();
    if (!at_end()) fail("trailing characters after pooling fraction");
    return alpha;
  }

  NetworkSpec parse() {
    std::vector<RawLayer> raw;
    while (true) {
      if (consume_word("output")) {
        if (pos_ != text_.size()) fail("trailing characters after 'output'");
        break;
      }
      if (at_end()) fail("expected 'output'");
      parse_item(raw);
      expect('-');
    }
    return assign_filters(raw);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }
  [[noreturn]] void fail_at(const std::string& what, std::size_t pos) const { throw ParseError(what, pos); }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  bool consume(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }

  bool consume_word(std::string_view word) {
    if (text_.substr(pos_, word.size()) != word) return false;
    pos_ += word.size();
    return true;
  }

  int parse_int() {
    if (!is_digit(peek())) fail("expected integer");
    const std::size_t start = pos_;
    long long v = 0;
    while (is_digit(peek())) {
      v = v * 10 + (text_[pos_] - '0');
      if (v > kMaxNumber) fail_at("number too large", start);
      ++pos_;
    }
    return static_cast<int>(v);
  }

  void parse_item(std::vector<RawLayer>& out) {
    if (!consume('(')) {
      out.push_back(parse_layer());
      return;
    }
    std::vector<RawLayer> body{parse_layer()};
    while (consume('-')) body.push_back(parse_layer());
    expect(')');
    expect('x');
    const std::size_t count_pos = pos_;
    const int repeats = parse_int();
    if (repeats < 1) fail_at("repetition count must be at least 1", count_pos);
    for (int r = 0; r < repeats; ++r) out.insert(out.end(), body.begin(), body.end());
  }

  RawLayer parse_layer() {
    const std::size_t start = pos_;
    if (consume_word("FMP")) return parse_fmp();
    if (consume_word("MP2")) return Mp2Spec{};
    RawConv conv{RawConv::Count::kBare, 0, 0, start};
    if (is_digit(peek())) {
      conv.value = parse_int();
      if (conv.value < 1) fail_at("filter count must be at least 1", start);
      conv.count = consume('n') ? RawConv::Count::kLinear : RawConv::Count::kExplicit;
    }
    if (!consume('C')) fail("expected layer ('C', 'FMP', or 'MP2')");
    const std::size_t size_pos = pos_;
    conv.filter_size = parse_int();
    if (conv.filter_size < 1) fail_at("filter size must be at least 1", size_pos);
    return conv;
  }

  FmpSpec parse_fmp() {
    expect('(');
    const std::size_t alpha_pos = pos_;
    Alpha alpha = parse_alpha();
    const double a = alpha.value();
    if (!(a > 1.0 && a < 3.0)) fail_at("pooling fraction " + alpha.to_string() + " outside (1, 3)", alpha_pos);
    expect(')');
    FmpSpec spec{alpha, options_.default_mode, options_.default_kind};
    if (consume(':')) {
      if (consume_word("disjoint")) {
        spec.mode = RegionMode::kDisjoint;
      } else if (consume_word("overlap")) {
        spec.mode = RegionMode::kOverlapping;
      } else {
        fail("expected 'disjoint' or 'overlap'");
      }
      expect(':');
      if (consume_word("random")) {
        spec.kind = SequenceKind::kRandom;
      } else if (consume_word("pseudo")) {
        spec.kind = SequenceKind::kPseudorandom;
      } else {
        fail("expected 'random' or 'pseudo'");
      }
    }
    return spec;
  }

  Alpha parse_alpha() {
    const std::size_t start = pos_;
    if (!is_digit(peek())) fail("expected pooling fraction");
    std::size_t end = pos_;
    while (end < text_.size() && is_digit(text_[end])) ++end;
    if (end < text_.size() && text_[end] == '^') {
      const int base = parse_int();
      expect('^');
      const int num = parse_int();
      expect('/');
      const std::size_t den_pos = pos_;
      const int den = parse_int();
      if (den == 0) fail_at("zero exponent denominator", den_pos);
      return Alpha::radical(base, num, den);
    }
    if (end < text_.size() && text_[end] == '.') {
      ++end;
      if (end >= text_.size() || !is_digit(text_[end])) fail_at("expected digits after '.'", end);
      while (end < text_.size() && is_digit(text_[end])) ++end;
    }
    double value = 0.0;
    const auto res = std::from_chars(text_.data() + start, text_.data() + end, value);
    if (res.ec != std::errc() || res.ptr != text_.data() + end) fail_at("malformed pooling fraction", start);
    pos_ = end;
    return Alpha::from_decimal(value);
  }

  NetworkSpec assign_filters(const std::vector<RawLayer>& raw) const {
    NetworkSpec spec;
    int conv_index = 0;
    int step = 0;
    for (const auto& layer : raw) {
      if (const auto* c = std::get_if<RawConv>(&layer)) {
        ++conv_index;
        int filters = 0;
        switch (c->count) {
          case RawConv::Count::kExplicit:
            filters = c->value;
            break;
          case RawConv::Count::kLinear:
            step = c->value;
            filters = step * conv_index;
            break;
          case RawConv::Count::kBare:
            if (step == 0) fail_at("convolution without filter count and no preceding 'kn' schedule", c->position);
            filters = step * conv_index;
            break;
        }
        if (filters > kMaxNumber) fail_at("filter count too large", c->position);
        spec.layers.emplace_back(ConvSpec{filters, c->filter_size});
      } else if (const auto* f = std::get_if<FmpSpec>(&layer)) {
        spec.layers.emplace_back(*f);
      } else {
        spec.layers.emplace_back(Mp2Spec{});
      }
    }
    spec.layers.emplace_back(OutputSpec{});
    return spec;
  }

  std::string_view text_;
  const ParseOptions& options_;
  std::size_t pos_ = 0;
};

int grow(int size, const LayerSpec& layer) {
  if (const auto* c = std::get_if<ConvSpec>(&layer)) return size + c->filter_size - 1;
  if (std::holds_alternative<Mp2Spec>(layer)) return size * 2;
  if (const auto* f = std::get_if<FmpSpec>(&layer)) {
    return static_cast<int>(std::floor(size * f->alpha.value() + 0.5));
  }
  return size;
}

}  // namespace

NetworkSpec parse_spec(std::string_view text, const ParseOptions& options) {
  return Parser(text, options).parse();
}

Alpha parse_alpha(std::string_view text) { return Parser(text, ParseOptions{}).parse_alpha_text(); }

NetworkSpec compute_sizes(NetworkSpec spec) {
  const std::size_t n = spec.layers.size();
  spec.spatial_sizes.assign(n, 1);
  for (std::size_t k = n - 1; k-- > 0;) {
    spec.spatial_sizes[k] = grow(spec.spatial_sizes[k + 1], spec.layers[k]);
  }
  return spec;
}

NetworkSpec parse_and_size(std::string_view text, const ParseOptions& options) {
  return compute_sizes(parse_spec(text, options));
}

std::string format_spec(const NetworkSpec& spec) {
  std::string out;
  for (const auto& layer : spec.layers) {
    if (!out.empty()) out += '-';
    out += layer_text(layer);
  }
  return out.empty() ? "output" : out;
}

}  // namespace fmp
