#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fmp {

struct Shape3 {
  int height = 0;
  int width = 0;
  int channels = 0;

  std::size_t size() const {
    return static_cast<std::size_t>(height) * static_cast<std::size_t>(width) *
           static_cast<std::size_t>(channels);
  }
  friend bool operator==(const Shape3&, const Shape3&) = default;
};

/// Dense H x W x C feature map, row-major in (row, col, channel).
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(Shape3 shape, double fill = 0.0)
      : shape_(shape), values_(shape.size(), fill) {}
  Tensor3(int height, int width, int channels, double fill = 0.0)
      : Tensor3(Shape3{height, width, channels}, fill) {}
  /// Takes ownership of `values`; throws ShapeError when the length is wrong.
  Tensor3(Shape3 shape, std::vector<double> values);

  Shape3 shape() const { return shape_; }
  int height() const { return shape_.height; }
  int width() const { return shape_.width; }
  int channels() const { return shape_.channels; }
  std::size_t size() const { return values_.size(); }

  std::size_t index(int row, int col, int channel) const {
    return (static_cast<std::size_t>(row) * static_cast<std::size_t>(shape_.width) +
            static_cast<std::size_t>(col)) *
               static_cast<std::size_t>(shape_.channels) +
           static_cast<std::size_t>(channel);
  }
  double& at(int row, int col, int channel) { return values_[index(row, col, channel)]; }
  double at(int row, int col, int channel) const { return values_[index(row, col, channel)]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  /// Channel vector of one pixel.
  std::span<double> pixel(int row, int col) {
    return {values_.data() + index(row, col, 0), static_cast<std::size_t>(shape_.channels)};
  }
  std::span<const double> pixel(int row, int col) const {
    return {values_.data() + index(row, col, 0), static_cast<std::size_t>(shape_.channels)};
  }

  bool all_finite() const;
  double sum() const;

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

 private:
  Shape3 shape_;
  std::vector<double> values_;
};

}  // namespace fmp
