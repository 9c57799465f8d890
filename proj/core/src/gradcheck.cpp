#include "myogan/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "myogan/errors.hpp"

namespace myogan {

namespace {

void update_result(GradCheckResult& res, double fd, double an, double floor_scale,
                   std::size_t index) {
  const double denom = std::max({std::fabs(fd), std::fabs(an), floor_scale});
  const double rel = std::fabs(fd - an) / denom;
  if (rel > res.max_rel_error) {
    res.max_rel_error = rel;
    res.worst_index = index;
    res.analytic_at_worst = an;
    res.numeric_at_worst = fd;
  }
}

double floor_from(std::span<const double> analytic) {
  double amax = 0.0;
  for (double a : analytic) amax = std::max(amax, std::fabs(a));
  return 1e-6 * std::max(1.0, amax);
}

}  // namespace

GradCheckResult grad_check(const std::function<double()>& f, std::span<double> values,
                           std::span<const double> analytic, double step) {
  if (values.size() != analytic.size()) {
    throw InputError("grad_check: analytic gradient size mismatch");
  }
  GradCheckResult res;
  const double floor_scale = floor_from(analytic);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double saved = values[i];
    values[i] = saved + step;
    const double fp = f();
    values[i] = saved - step;
    const double fm = f();
    values[i] = saved;
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
      throw InputError("grad_check: non-finite function value during perturbation");
    }
    const double fd = (fp - fm) / (2.0 * step);
    update_result(res, fd, analytic[i], floor_scale, i);
  }
  return res;
}

GradCheckResult grad_check(const std::function<double()>& f, ParamStore& store, double step) {
  GradCheckResult res;
  const auto all_grads = store.flat_grads();
  const double floor_scale = floor_from(all_grads);
  std::size_t flat = 0;
  for (auto& entry : store.entries()) {
    for (std::size_t i = 0; i < entry.value.size(); ++i, ++flat) {
      const double saved = entry.value.data[i];
      entry.value.data[i] = saved + step;
      const double fp = f();
      entry.value.data[i] = saved - step;
      const double fm = f();
      entry.value.data[i] = saved;
      if (!std::isfinite(fp) || !std::isfinite(fm)) {
        throw InputError("grad_check: non-finite function value at parameter " + entry.name);
      }
      const double fd = (fp - fm) / (2.0 * step);
      update_result(res, fd, entry.grad.data[i], floor_scale, flat);
    }
  }
  return res;
}

}  // namespace myogan
