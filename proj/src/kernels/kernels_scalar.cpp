// Copyright (c) 2026 The finr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>

#include "finr/kernels.hpp"
#include "sincos_poly.hpp"

namespace finr::kernels {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void gemv(const double* w, std::size_t rows, std::size_t cols, const double* x,
          const double* bias, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    y[r] = dot(w + r * cols, x, cols) + (bias ? bias[r] : 0.0);
  }
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gemv_t_acc(const double* w, std::size_t rows, std::size_t cols, const double* delta,
                double* out) {
  for (std::size_t r = 0; r < rows; ++r) {
    if (delta[r] != 0.0) axpy(delta[r], w + r * cols, out, cols);
  }
}

void ger(double* g, std::size_t rows, std::size_t cols, double alpha, const double* u,
         const double* v) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double s = alpha * u[r];
    if (s != 0.0) axpy(s, v, g + r * cols, cols);
  }
}

void mul(const double* x, const double* scale, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] * scale[i];
}

void sincos_2pi(const double* t, double* c, double* s, std::size_t n) {
  using namespace detail;
  for (std::size_t i = 0; i < n; ++i) {
    const double k = std::nearbyint(4.0 * t[i]);
    const double r = t[i] - 0.25 * k;
    const double theta = kTwoPi * r;
    const double z = theta * theta;
    double ps = kSin[0];
    double pc = kCos[0];
    for (int j = 1; j < kTerms; ++j) {
      ps = ps * z + kSin[j];
      pc = pc * z + kCos[j];
    }
    const double sin_t = ps * theta;
    const double cos_t = pc;
    const int q = static_cast<int>(k - 4.0 * std::floor(0.25 * k));
    switch (q) {
      case 0: c[i] = cos_t;  s[i] = sin_t;  break;
      case 1: c[i] = -sin_t; s[i] = cos_t;  break;
      case 2: c[i] = -cos_t; s[i] = -sin_t; break;
      default: c[i] = sin_t; s[i] = -cos_t; break;
    }
  }
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void adam(double* param, const double* grad, double* m, double* v, std::size_t n, double lr,
          double beta1, double beta2, double eps, double bc1, double bc2) {
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
    param[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{dot, gemv, gemv_t_acc, ger, axpy, mul, sincos_2pi, sum_sq_diff,
                                 adam};
  return table;
}

}  // namespace finr::kernels
