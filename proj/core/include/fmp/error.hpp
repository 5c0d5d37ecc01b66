#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fmp {

/// Input/output size ratio outside the admissible pooling ranges.
class InvalidRatioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Tensor or grid dimensions that do not line up.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Network shorthand syntax error. `position()` is a 0-based byte offset.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& message, std::size_t position)
      : std::invalid_argument(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Malformed or truncated file (IDX, pixmap, checkpoint).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Training produced a non-finite loss.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fmp
