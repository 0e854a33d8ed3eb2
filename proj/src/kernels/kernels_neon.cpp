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

// NEON (aarch64) variants, two doubles per vector. Tails go to the scalar table.

#include <arm_neon.h>

#include "finr/kernels.hpp"
#include "sincos_poly.hpp"

namespace finr::kernels {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void gemv(const double* w, std::size_t rows, std::size_t cols, const double* x,
          const double* bias, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    y[r] = dot(w + r * cols, x, cols) + (bias ? bias[r] : 0.0);
  }
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
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
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vmulq_f64(vld1q_f64(x + i), vld1q_f64(scale + i)));
  for (; i < n; ++i) y[i] = x[i] * scale[i];
}

void sincos_2pi(const double* t, double* c, double* s, std::size_t n) {
  using namespace detail;
  const float64x2_t four = vdupq_n_f64(4.0);
  const float64x2_t quarter = vdupq_n_f64(0.25);
  const float64x2_t two_pi = vdupq_n_f64(kTwoPi);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t vt = vld1q_f64(t + i);
    const float64x2_t k = vrndnq_f64(vmulq_f64(four, vt));
    const float64x2_t r = vfmsq_f64(vt, quarter, k);
    const float64x2_t theta = vmulq_f64(two_pi, r);
    const float64x2_t z = vmulq_f64(theta, theta);
    float64x2_t ps = vdupq_n_f64(kSin[0]);
    float64x2_t pc = vdupq_n_f64(kCos[0]);
    for (int j = 1; j < kTerms; ++j) {
      ps = vfmaq_f64(vdupq_n_f64(kSin[j]), ps, z);
      pc = vfmaq_f64(vdupq_n_f64(kCos[j]), pc, z);
    }
    const float64x2_t sin_t = vmulq_f64(ps, theta);
    const float64x2_t cos_t = pc;
    const float64x2_t q = vfmsq_f64(k, four, vrndmq_f64(vmulq_f64(quarter, k)));
    const uint64x2_t q1 = vceqq_f64(q, vdupq_n_f64(1.0));
    const uint64x2_t q2 = vceqq_f64(q, vdupq_n_f64(2.0));
    const uint64x2_t q3 = vceqq_f64(q, vdupq_n_f64(3.0));
    const uint64x2_t swap = vorrq_u64(q1, q3);
    const float64x2_t vc = vbslq_f64(swap, sin_t, cos_t);
    const float64x2_t vs = vbslq_f64(swap, cos_t, sin_t);
    vst1q_f64(c + i, vbslq_f64(vorrq_u64(q1, q2), vnegq_f64(vc), vc));
    vst1q_f64(s + i, vbslq_f64(vorrq_u64(q2, q3), vnegq_f64(vs), vs));
  }
  if (i < n) scalar_table().sincos_2pi(t + i, c + i, s + i, n - i);
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vfmaq_f64(acc, d, d);
  }
  double total = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    total += d * d;
  }
  return total;
}

void adam(double* param, const double* grad, double* m, double* v, std::size_t n, double lr,
          double beta1, double beta2, double eps, double bc1, double bc2) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t g = vld1q_f64(grad + i);
    const float64x2_t mi =
        vfmaq_f64(vmulq_n_f64(g, 1.0 - beta1), vld1q_f64(m + i), vdupq_n_f64(beta1));
    const float64x2_t vi = vfmaq_f64(vmulq_f64(vmulq_n_f64(g, 1.0 - beta2), g), vld1q_f64(v + i),
                                     vdupq_n_f64(beta2));
    vst1q_f64(m + i, mi);
    vst1q_f64(v + i, vi);
    const float64x2_t denom =
        vaddq_f64(vsqrtq_f64(vdivq_f64(vi, vdupq_n_f64(bc2))), vdupq_n_f64(eps));
    const float64x2_t step =
        vdivq_f64(vmulq_n_f64(vdivq_f64(mi, vdupq_n_f64(bc1)), lr), denom);
    vst1q_f64(param + i, vsubq_f64(vld1q_f64(param + i), step));
  }
  if (i < n) {
    scalar_table().adam(param + i, grad + i, m + i, v + i, n - i, lr, beta1, beta2, eps, bc1, bc2);
  }
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable table{dot, gemv, gemv_t_acc, ger, axpy, mul, sincos_2pi, sum_sq_diff,
                                 adam};
  return table;
}

}  // namespace finr::kernels
