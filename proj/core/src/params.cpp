#include "myogan/params.hpp"

#include <cmath>

#include "myogan/errors.hpp"

namespace myogan {

ParamStore::Handle ParamStore::add(std::string name, std::vector<std::size_t> shape, double fill) {
  for (const Entry& e : entries_) {
    if (e.name == name) throw InputError("duplicate parameter name: " + name);
  }
  Entry e;
  e.name = std::move(name);
  e.value = Tensor(shape, fill);
  e.grad = Tensor(std::move(shape), 0.0);
  entries_.push_back(std::move(e));
  return entries_.size() - 1;
}

std::size_t ParamStore::scalar_count() const {
  std::size_t n = 0;
  for (const Entry& e : entries_) n += e.value.size();
  return n;
}

void ParamStore::zero_grad() {
  for (Entry& e : entries_) e.grad.fill(0.0);
}

double ParamStore::grad_norm() const {
  double ss = 0.0;
  for (const Entry& e : entries_) {
    for (double g : e.grad.data) ss += g * g;
  }
  return std::sqrt(ss);
}

void ParamStore::clip_grad(double max_norm) {
  const double norm = grad_norm();
  if (norm <= max_norm || norm == 0.0) return;
  const double scale = max_norm / norm;
  for (Entry& e : entries_) {
    for (double& g : e.grad.data) g *= scale;
  }
}

void ParamStore::ascend(double lr) {
  for (Entry& e : entries_) {
    for (std::size_t i = 0; i < e.value.size(); ++i) e.value.data[i] += lr * e.grad.data[i];
  }
}

bool ParamStore::values_finite() const {
  for (const Entry& e : entries_) {
    if (!e.value.all_finite()) return false;
  }
  return true;
}

bool ParamStore::grads_finite() const {
  for (const Entry& e : entries_) {
    if (!e.grad.all_finite()) return false;
  }
  return true;
}

std::vector<double> ParamStore::flat_values() const {
  std::vector<double> out;
  out.reserve(scalar_count());
  for (const Entry& e : entries_) out.insert(out.end(), e.value.data.begin(), e.value.data.end());
  return out;
}

void ParamStore::set_flat_values(std::span<const double> v) {
  if (v.size() != scalar_count()) {
    throw InputError("flat value size mismatch: " + std::to_string(v.size()) + " vs " +
                     std::to_string(scalar_count()));
  }
  std::size_t off = 0;
  for (Entry& e : entries_) {
    for (std::size_t i = 0; i < e.value.size(); ++i) e.value.data[i] = v[off++];
  }
}

std::vector<double> ParamStore::flat_grads() const {
  std::vector<double> out;
  out.reserve(scalar_count());
  for (const Entry& e : entries_) out.insert(out.end(), e.grad.data.begin(), e.grad.data.end());
  return out;
}

void glorot_init(Tensor& t, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (double& w : t.data) w = rng.uniform(-bound, bound);
}

void Adam::step(ParamStore& store) {
  if (m_.empty()) {
    for (const auto& e : store.entries()) {
      m_.emplace_back(e.value.size(), 0.0);
      v_.emplace_back(e.value.size(), 0.0);
    }
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  auto& entries = store.entries();
  for (std::size_t k = 0; k < entries.size(); ++k) {
    auto& val = entries[k].value.data;
    const auto& grad = entries[k].grad.data;
    for (std::size_t i = 0; i < val.size(); ++i) {
      m_[k][i] = beta1_ * m_[k][i] + (1.0 - beta1_) * grad[i];
      v_[k][i] = beta2_ * v_[k][i] + (1.0 - beta2_) * grad[i] * grad[i];
      const double mhat = m_[k][i] / bc1;
      const double vhat = v_[k][i] / bc2;
      val[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
    }
  }
}

}  // namespace myogan
