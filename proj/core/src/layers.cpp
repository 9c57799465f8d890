#include "myogan/layers.hpp"

#include <algorithm>
#include <cmath>

#include "myogan/errors.hpp"

namespace myogan {

double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) {
  if (x > 30.0) return x;
  if (x < -30.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

double softplus_grad(double x) { return sigmoid(x); }

void affine(std::span<const double> x, const Tensor& w, const Tensor& b, std::span<double> y) {
  if (w.rank() != 2 || w.cols() != x.size() || b.size() != w.rows() || y.size() != w.rows()) {
    throw InputError("affine shape mismatch: W " + shape_str(w.shape) + ", x[" +
                     std::to_string(x.size()) + "], b[" + std::to_string(b.size()) + "]");
  }
  const std::size_t m = w.rows(), n = w.cols();
  for (std::size_t i = 0; i < m; ++i) {
    const double* wrow = w.data.data() + i * n;
    double acc = b(i);
    for (std::size_t j = 0; j < n; ++j) acc += wrow[j] * x[j];
    y[i] = acc;
  }
}

void affine_backward(std::span<const double> x, const Tensor& w, std::span<const double> dy,
                     Tensor& dw, Tensor& db, std::span<double> dx) {
  const std::size_t m = w.rows(), n = w.cols();
  for (std::size_t i = 0; i < m; ++i) {
    const double g = dy[i];
    double* dwrow = dw.data.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) dwrow[j] += g * x[j];
    db(i) += g;
  }
  if (!dx.empty()) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < m; ++i) acc += w(i, j) * dy[i];
      dx[j] += acc;
    }
  }
}

Tensor conv1d(const Tensor& x, const Tensor& kernels, const Tensor& bias) {
  if (x.rank() != 2 || kernels.rank() != 3 || kernels.dim(1) != x.rows() ||
      bias.size() != kernels.dim(0)) {
    throw InputError("conv1d shape mismatch: x " + shape_str(x.shape) + ", kernels " +
                     shape_str(kernels.shape));
  }
  const std::size_t channels = x.rows(), length = x.cols();
  const std::size_t nk = kernels.dim(0), width = kernels.dim(2);
  if (length < width) {
    throw InputError("conv1d: input length " + std::to_string(length) + " shorter than kernel " +
                     std::to_string(width));
  }
  const std::size_t out_len = length - width + 1;
  Tensor y({nk, out_len});
  for (std::size_t k = 0; k < nk; ++k) {
    for (std::size_t j = 0; j < out_len; ++j) {
      double acc = bias(k);
      for (std::size_t c = 0; c < channels; ++c) {
        const double* xr = x.data.data() + c * length + j;
        const double* kr = kernels.data.data() + (k * channels + c) * width;
        for (std::size_t u = 0; u < width; ++u) acc += kr[u] * xr[u];
      }
      y(k, j) = acc;
    }
  }
  return y;
}

void conv1d_backward(const Tensor& x, const Tensor& kernels, const Tensor& dy, Tensor& dk,
                     Tensor& dbias, Tensor* dx) {
  const std::size_t channels = x.rows(), length = x.cols();
  const std::size_t nk = kernels.dim(0), width = kernels.dim(2);
  const std::size_t out_len = length - width + 1;
  for (std::size_t k = 0; k < nk; ++k) {
    double bacc = 0.0;
    for (std::size_t j = 0; j < out_len; ++j) bacc += dy(k, j);
    dbias(k) += bacc;
    for (std::size_t c = 0; c < channels; ++c) {
      const double* xr = x.data.data() + c * length;
      double* dkr = dk.data.data() + (k * channels + c) * width;
      for (std::size_t u = 0; u < width; ++u) {
        double acc = 0.0;
        for (std::size_t j = 0; j < out_len; ++j) acc += dy(k, j) * xr[j + u];
        dkr[u] += acc;
      }
      if (dx != nullptr) {
        const double* kr = kernels.data.data() + (k * channels + c) * width;
        double* dxr = dx->data.data() + c * length;
        for (std::size_t j = 0; j < out_len; ++j) {
          const double g = dy(k, j);
          for (std::size_t u = 0; u < width; ++u) dxr[j + u] += g * kr[u];
        }
      }
    }
  }
}

std::vector<double> max_over_time(const Tensor& x, std::vector<std::size_t>* argmax) {
  if (x.rank() != 2 || x.cols() == 0) {
    throw InputError("max_over_time requires a non-empty K x M matrix");
  }
  const std::size_t k = x.rows(), m = x.cols();
  std::vector<double> out(k);
  if (argmax != nullptr) argmax->assign(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t best = 0;
    double bv = x(i, 0);
    for (std::size_t j = 1; j < m; ++j) {
      if (x(i, j) > bv) {  // strict: ties keep the earliest index
        bv = x(i, j);
        best = j;
      }
    }
    out[i] = bv;
    if (argmax != nullptr) (*argmax)[i] = best;
  }
  return out;
}

void max_over_time_backward(const std::vector<std::size_t>& argmax, std::span<const double> dy,
                            Tensor& dx) {
  for (std::size_t i = 0; i < argmax.size(); ++i) dx(i, argmax[i]) += dy[i];
}

void lstm_step(std::span<const double> x, std::span<const double> h_prev,
               std::span<const double> c_prev, const Tensor& w, const Tensor& u, const Tensor& b,
               std::span<double> h_out, std::span<double> c_out, LstmCache* cache) {
  const std::size_t hidden = h_prev.size();
  if (w.rank() != 2 || w.rows() != 4 * hidden || w.cols() != x.size() || u.rows() != 4 * hidden ||
      u.cols() != hidden || b.size() != 4 * hidden || c_prev.size() != hidden ||
      h_out.size() != hidden || c_out.size() != hidden) {
    throw InputError("lstm_step shape mismatch: W " + shape_str(w.shape) + ", U " +
                     shape_str(u.shape) + ", x[" + std::to_string(x.size()) + "], h[" +
                     std::to_string(hidden) + "]");
  }
  std::vector<double> pre(4 * hidden);
  for (std::size_t r = 0; r < 4 * hidden; ++r) {
    const double* wr = w.data.data() + r * w.cols();
    const double* ur = u.data.data() + r * hidden;
    double acc = b(r);
    for (std::size_t j = 0; j < x.size(); ++j) acc += wr[j] * x[j];
    for (std::size_t j = 0; j < hidden; ++j) acc += ur[j] * h_prev[j];
    pre[r] = acc;
  }
  LstmCache local;
  LstmCache& cc = cache != nullptr ? *cache : local;
  cc.i.resize(hidden);
  cc.f.resize(hidden);
  cc.g.resize(hidden);
  cc.o.resize(hidden);
  cc.c_prev.assign(c_prev.begin(), c_prev.end());
  cc.c_new.resize(hidden);
  cc.tanh_c_new.resize(hidden);
  for (std::size_t j = 0; j < hidden; ++j) {
    cc.i[j] = sigmoid(pre[j]);
    cc.f[j] = sigmoid(pre[hidden + j]);
    cc.g[j] = std::tanh(pre[2 * hidden + j]);
    cc.o[j] = sigmoid(pre[3 * hidden + j]);
    cc.c_new[j] = cc.f[j] * c_prev[j] + cc.i[j] * cc.g[j];
    cc.tanh_c_new[j] = std::tanh(cc.c_new[j]);
    c_out[j] = cc.c_new[j];
    h_out[j] = cc.o[j] * cc.tanh_c_new[j];
  }
}

void lstm_step_backward(std::span<const double> x, std::span<const double> h_prev,
                        const Tensor& w, const Tensor& u, const LstmCache& cache,
                        std::span<const double> dh, std::span<const double> dc, Tensor& dw,
                        Tensor& du, Tensor& db, std::span<double> dx, std::span<double> dh_prev,
                        std::span<double> dc_prev) {
  const std::size_t hidden = cache.i.size();
  std::vector<double> dpre(4 * hidden);
  for (std::size_t j = 0; j < hidden; ++j) {
    const double i = cache.i[j], f = cache.f[j], g = cache.g[j], o = cache.o[j];
    const double tc = cache.tanh_c_new[j];
    const double dcj = dc[j] + dh[j] * o * (1.0 - tc * tc);
    const double doj = dh[j] * tc;
    const double dij = dcj * g;
    const double dfj = dcj * cache.c_prev[j];
    const double dgj = dcj * i;
    dc_prev[j] += dcj * f;
    dpre[j] = dij * i * (1.0 - i);
    dpre[hidden + j] = dfj * f * (1.0 - f);
    dpre[2 * hidden + j] = dgj * (1.0 - g * g);
    dpre[3 * hidden + j] = doj * o * (1.0 - o);
  }
  const std::size_t in_dim = x.size();
  for (std::size_t r = 0; r < 4 * hidden; ++r) {
    const double g = dpre[r];
    if (g == 0.0) continue;
    double* dwr = dw.data.data() + r * in_dim;
    double* dur = du.data.data() + r * hidden;
    for (std::size_t j = 0; j < in_dim; ++j) dwr[j] += g * x[j];
    for (std::size_t j = 0; j < hidden; ++j) dur[j] += g * h_prev[j];
    db(r) += g;
  }
  for (std::size_t j = 0; j < in_dim; ++j) {
    double acc = 0.0;
    for (std::size_t r = 0; r < 4 * hidden; ++r) acc += w(r, j) * dpre[r];
    dx[j] += acc;
  }
  for (std::size_t j = 0; j < hidden; ++j) {
    double acc = 0.0;
    for (std::size_t r = 0; r < 4 * hidden; ++r) acc += u(r, j) * dpre[r];
    dh_prev[j] += acc;
  }
}

void highway(std::span<const double> x, const Tensor& wh, const Tensor& bh, const Tensor& wt,
             const Tensor& bt, std::span<double> y, HighwayCache* cache) {
  const std::size_t n = x.size();
  if (wh.rank() != 2 || wh.rows() != n || wh.cols() != n || wt.rows() != n || wt.cols() != n ||
      bh.size() != n || bt.size() != n || y.size() != n) {
    throw InputError("highway shape mismatch: Wh " + shape_str(wh.shape) + ", x[" +
                     std::to_string(n) + "]");
  }
  HighwayCache local;
  HighwayCache& cc = cache != nullptr ? *cache : local;
  cc.gate.resize(n);
  cc.h_pre.resize(n);
  cc.h_act.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double tpre = bt(i);
    double hpre = bh(i);
    const double* wtr = wt.data.data() + i * n;
    const double* whr = wh.data.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      tpre += wtr[j] * x[j];
      hpre += whr[j] * x[j];
    }
    cc.gate[i] = sigmoid(tpre);
    cc.h_pre[i] = hpre;
    cc.h_act[i] = hpre > 0.0 ? hpre : 0.0;
    y[i] = cc.gate[i] * cc.h_act[i] + (1.0 - cc.gate[i]) * x[i];
  }
}

void highway_backward(std::span<const double> x, const Tensor& wh, const Tensor& wt,
                      const HighwayCache& cache, std::span<const double> dy, Tensor& dwh,
                      Tensor& dbh, Tensor& dwt, Tensor& dbt, std::span<double> dx) {
  const std::size_t n = x.size();
  std::vector<double> dhpre(n), dtpre(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double g = cache.gate[i];
    const double dgi = dy[i] * (cache.h_act[i] - x[i]);
    dhpre[i] = dy[i] * g * (cache.h_pre[i] > 0.0 ? 1.0 : 0.0);
    dtpre[i] = dgi * g * (1.0 - g);
    dx[i] += dy[i] * (1.0 - g);
  }
  for (std::size_t i = 0; i < n; ++i) {
    double* dwhr = dwh.data.data() + i * n;
    double* dwtr = dwt.data.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      dwhr[j] += dhpre[i] * x[j];
      dwtr[j] += dtpre[i] * x[j];
    }
    dbh(i) += dhpre[i];
    dbt(i) += dtpre[i];
  }
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += wh(i, j) * dhpre[i] + wt(i, j) * dtpre[i];
    dx[j] += acc;
  }
}

void softmax(std::span<const double> z, std::span<double> p) {
  if (z.empty() || z.size() != p.size()) throw InputError("softmax: empty or mismatched spans");
  if (!all_finite(z)) throw InputError("softmax: non-finite input");
  const double zmax = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    p[i] = std::exp(z[i] - zmax);
    sum += p[i];
  }
  for (std::size_t i = 0; i < z.size(); ++i) p[i] /= sum;
}

void softmax_backward(std::span<const double> p, std::span<const double> dp,
                      std::span<double> dz) {
  double dot = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) dot += dp[i] * p[i];
  for (std::size_t i = 0; i < p.size(); ++i) dz[i] += p[i] * (dp[i] - dot);
}

}  // namespace myogan
