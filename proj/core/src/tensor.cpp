#include "fmp/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "fmp/error.hpp"

namespace fmp {

Tensor3::Tensor3(Shape3 shape, std::vector<double> values) : shape_(shape), values_(std::move(values)) {
  if (values_.size() != shape_.size()) throw ShapeError("tensor value count does not match shape");
}

bool Tensor3::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double Tensor3::sum() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

}  // namespace fmp
