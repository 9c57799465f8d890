#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "myogan/rng.hpp"
#include "myogan/tensor.hpp"

namespace myogan {

// Named parameter tensors with per-tensor gradient accumulators.
// Gradient tensors always mirror the parameter shapes. Accumulation is
// single-writer: callers must not share one store across concurrent
// backward passes.
class ParamStore {
 public:
  using Handle = std::size_t;

  struct Entry {
    std::string name;
    Tensor value;
    Tensor grad;
  };

  Handle add(std::string name, std::vector<std::size_t> shape, double fill = 0.0);

  Tensor& value(Handle h) { return entries_[h].value; }
  const Tensor& value(Handle h) const { return entries_[h].value; }
  Tensor& grad(Handle h) { return entries_[h].grad; }
  const Tensor& grad(Handle h) const { return entries_[h].grad; }

  const std::vector<Entry>& entries() const { return entries_; }
  std::vector<Entry>& entries() { return entries_; }
  std::size_t tensor_count() const { return entries_.size(); }
  std::size_t scalar_count() const;

  void zero_grad();
  double grad_norm() const;
  // Scales gradients so their global L2 norm is at most max_norm.
  void clip_grad(double max_norm);
  // value += lr * grad (gradient ascent; pass negative lr to descend).
  void ascend(double lr);

  bool values_finite() const;
  bool grads_finite() const;

  // Flat serialization order: entries in registration order, row-major.
  std::vector<double> flat_values() const;
  void set_flat_values(std::span<const double> v);
  std::vector<double> flat_grads() const;

 private:
  std::vector<Entry> entries_;
};

// Uniform init in +-sqrt(6 / (fan_in + fan_out)).
void glorot_init(Tensor& t, std::size_t fan_in, std::size_t fan_out, Rng& rng);

// Adam in descent direction on a ParamStore (value -= step using grads).
class Adam {
 public:
  Adam(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step(ParamStore& store);

 private:
  double lr_, beta1_, beta2_, eps_;
  std::size_t t_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

}  // namespace myogan
