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

// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma and
// is only entered after the dispatcher has confirmed CPU support, so it must not
// define or instantiate inline code shared with other translation units.
// Tails shorter than a vector fall through to the scalar table.

#include <immintrin.h>

#include "finr/kernels.hpp"
#include "sincos_poly.hpp"

namespace finr::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12), acc3);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
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
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    _mm256_storeu_pd(y + i + 4,
                     _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
  }
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
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
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(scale + i)));
  }
  for (; i < n; ++i) y[i] = x[i] * scale[i];
}

void sincos_2pi(const double* t, double* c, double* s, std::size_t n) {
  using namespace detail;
  const __m256d four = _mm256_set1_pd(4.0);
  const __m256d quarter = _mm256_set1_pd(0.25);
  const __m256d two_pi = _mm256_set1_pd(kTwoPi);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d three = _mm256_set1_pd(3.0);
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vt = _mm256_loadu_pd(t + i);
    const __m256d k =
        _mm256_round_pd(_mm256_mul_pd(four, vt), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    const __m256d r = _mm256_fnmadd_pd(quarter, k, vt);
    const __m256d theta = _mm256_mul_pd(two_pi, r);
    const __m256d z = _mm256_mul_pd(theta, theta);
    __m256d ps = _mm256_set1_pd(kSin[0]);
    __m256d pc = _mm256_set1_pd(kCos[0]);
    for (int j = 1; j < kTerms; ++j) {
      ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(kSin[j]));
      pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(kCos[j]));
    }
    const __m256d sin_t = _mm256_mul_pd(ps, theta);
    const __m256d cos_t = pc;

    const __m256d q = _mm256_fnmadd_pd(
        four, _mm256_floor_pd(_mm256_mul_pd(quarter, k)), k);
    const __m256d q1 = _mm256_cmp_pd(q, one, _CMP_EQ_OQ);
    const __m256d q2 = _mm256_cmp_pd(q, two, _CMP_EQ_OQ);
    const __m256d q3 = _mm256_cmp_pd(q, three, _CMP_EQ_OQ);
    const __m256d swap = _mm256_or_pd(q1, q3);
    const __m256d neg_c = _mm256_or_pd(q1, q2);
    const __m256d neg_s = _mm256_or_pd(q2, q3);
    __m256d vc = _mm256_blendv_pd(cos_t, sin_t, swap);
    __m256d vs = _mm256_blendv_pd(sin_t, cos_t, swap);
    vc = _mm256_xor_pd(vc, _mm256_and_pd(neg_c, sign));
    vs = _mm256_xor_pd(vs, _mm256_and_pd(neg_s, sign));
    _mm256_storeu_pd(c + i, vc);
    _mm256_storeu_pd(s + i, vs);
  }
  if (i < n) scalar_table().sincos_2pi(t + i, c + i, s + i, n - i);
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    acc1 = _mm256_fmadd_pd(d1, d1, acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void adam(double* param, const double* grad, double* m, double* v, std::size_t n, double lr,
          double beta1, double beta2, double eps, double bc1, double bc2) {
  const __m256d b1 = _mm256_set1_pd(beta1);
  const __m256d b2 = _mm256_set1_pd(beta2);
  const __m256d omb1 = _mm256_set1_pd(1.0 - beta1);
  const __m256d omb2 = _mm256_set1_pd(1.0 - beta2);
  const __m256d vlr = _mm256_set1_pd(lr);
  const __m256d veps = _mm256_set1_pd(eps);
  const __m256d vbc1 = _mm256_set1_pd(bc1);
  const __m256d vbc2 = _mm256_set1_pd(bc2);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d g = _mm256_loadu_pd(grad + i);
    const __m256d mi = _mm256_fmadd_pd(b1, _mm256_loadu_pd(m + i), _mm256_mul_pd(omb1, g));
    const __m256d vi = _mm256_fmadd_pd(b2, _mm256_loadu_pd(v + i),
                                       _mm256_mul_pd(_mm256_mul_pd(omb2, g), g));
    _mm256_storeu_pd(m + i, mi);
    _mm256_storeu_pd(v + i, vi);
    const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(_mm256_div_pd(vi, vbc2)), veps);
    const __m256d step = _mm256_div_pd(_mm256_mul_pd(vlr, _mm256_div_pd(mi, vbc1)), denom);
    _mm256_storeu_pd(param + i, _mm256_sub_pd(_mm256_loadu_pd(param + i), step));
  }
  if (i < n) {
    scalar_table().adam(param + i, grad + i, m + i, v + i, n - i, lr, beta1, beta2, eps, bc1, bc2);
  }
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{dot, gemv, gemv_t_acc, ger, axpy, mul, sincos_2pi, sum_sq_diff,
                                 adam};
  return table;
}

}  // namespace finr::kernels
