#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "myogan/tensor.hpp"

namespace myogan {

// The fixed layer set needed by the generator and the discriminator.
// Every forward has a matching reverse-mode backward; backward functions
// ACCUMULATE into the gradient arguments (callers zero them per pass).
// 64-bit floats throughout; no normalization layers anywhere.

double sigmoid(double x);
double softplus(double x);
double softplus_grad(double x);  // d softplus / dx = sigmoid(x)

// y = W x + b, W is m x n.
void affine(std::span<const double> x, const Tensor& w, const Tensor& b, std::span<double> y);
void affine_backward(std::span<const double> x, const Tensor& w, std::span<const double> dy,
                     Tensor& dw, Tensor& db, std::span<double> dx);

// Valid cross-correlation. x: C x L, kernels: K x C x w, bias: K -> K x (L - w + 1).
Tensor conv1d(const Tensor& x, const Tensor& kernels, const Tensor& bias);
void conv1d_backward(const Tensor& x, const Tensor& kernels, const Tensor& dy, Tensor& dk,
                     Tensor& dbias, Tensor* dx);

// Per-channel max over the time axis; ties routed to the earliest index.
std::vector<double> max_over_time(const Tensor& x, std::vector<std::size_t>* argmax = nullptr);
void max_over_time_backward(const std::vector<std::size_t>& argmax, std::span<const double> dy,
                            Tensor& dx);

// One LSTM step. Gate blocks in the 4H weight rows are ordered [i, f, g, o];
// gates use the logistic function, the cell candidate uses tanh.
struct LstmCache {
  std::vector<double> i, f, g, o;
  std::vector<double> c_prev;
  std::vector<double> c_new;
  std::vector<double> tanh_c_new;
};
void lstm_step(std::span<const double> x, std::span<const double> h_prev,
               std::span<const double> c_prev, const Tensor& w, const Tensor& u, const Tensor& b,
               std::span<double> h_out, std::span<double> c_out, LstmCache* cache = nullptr);
void lstm_step_backward(std::span<const double> x, std::span<const double> h_prev,
                        const Tensor& w, const Tensor& u, const LstmCache& cache,
                        std::span<const double> dh, std::span<const double> dc, Tensor& dw,
                        Tensor& du, Tensor& db, std::span<double> dx, std::span<double> dh_prev,
                        std::span<double> dc_prev);

// Highway layer: y = g .* relu(Wh x + bh) + (1 - g) .* x, g = sigmoid(Wt x + bt).
struct HighwayCache {
  std::vector<double> gate;      // g
  std::vector<double> h_pre;     // Wh x + bh
  std::vector<double> h_act;     // relu(h_pre)
};
void highway(std::span<const double> x, const Tensor& wh, const Tensor& bh, const Tensor& wt,
             const Tensor& bt, std::span<double> y, HighwayCache* cache = nullptr);
void highway_backward(std::span<const double> x, const Tensor& wh, const Tensor& wt,
                      const HighwayCache& cache, std::span<const double> dy, Tensor& dwh,
                      Tensor& dbh, Tensor& dwt, Tensor& dbt, std::span<double> dx);

// Max-subtracted softmax; output sums to 1 within 1e-12 for finite input.
void softmax(std::span<const double> z, std::span<double> p);
void softmax_backward(std::span<const double> p, std::span<const double> dp, std::span<double> dz);

}  // namespace myogan
