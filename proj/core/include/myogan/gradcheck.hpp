#pragma once

#include <functional>
#include <span>

#include "myogan/params.hpp"

namespace myogan {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;
  double analytic_at_worst = 0.0;
  double numeric_at_worst = 0.0;
};

// Central finite differences of f against a precomputed reverse-mode gradient.
// f is evaluated with the entries of `values` mutated in place and must be
// twice continuously differentiable near the current point. The relative
// error denominator is floored at 1e-6 * max(1, ||analytic||_inf) so that
// exactly-zero components do not divide FD roundoff noise by zero.
GradCheckResult grad_check(const std::function<double()>& f, std::span<double> values,
                           std::span<const double> analytic, double step = 1e-5);

// Convenience: checks every parameter tensor of a store. The store's grad
// buffers must already hold the analytic gradient of f at the current values.
GradCheckResult grad_check(const std::function<double()>& f, ParamStore& store,
                           double step = 1e-5);

}  // namespace myogan
