#include "myogan/tensor.hpp"

#include <cmath>
#include <sstream>

#include "myogan/errors.hpp"

namespace myogan {

std::size_t shape_size(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

std::string shape_str(const std::vector<std::size_t>& shape) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "x" : "") << shape[i];
  os << "]";
  return os.str();
}

Tensor::Tensor(std::vector<std::size_t> s, double fill) : shape(std::move(s)) {
  if (shape.empty() || shape.size() > 3) {
    throw InputError("tensor rank must be 1..3, got " + std::to_string(shape.size()));
  }
  for (std::size_t d : shape) {
    if (d == 0) throw InputError("tensor dimension must be positive: " + shape_str(shape));
  }
  data.assign(shape_size(shape), fill);
}

Tensor Tensor::vec(std::vector<double> values) {
  Tensor t({values.size()});
  t.data = std::move(values);
  return t;
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols, std::vector<double> values) {
  Tensor t({rows, cols});
  if (values.size() != rows * cols) {
    throw InputError("matrix init: " + std::to_string(values.size()) + " values for " +
                     std::to_string(rows) + "x" + std::to_string(cols));
  }
  t.data = std::move(values);
  return t;
}

bool Tensor::all_finite() const { return myogan::all_finite(data); }

void Tensor::fill(double v) { data.assign(data.size(), v); }

bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace myogan
