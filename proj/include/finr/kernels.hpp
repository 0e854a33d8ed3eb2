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

#pragma once

// Data-parallel inner loops used by the embedding, network and optimizer.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, an AVX2+FMA (x86-64) or NEON (aarch64) variant. The variant is
// picked once at startup from the CPU features; FINR_ISA=scalar|avx2|neon in
// the environment or set_isa() overrides it. SIMD variants may differ from
// the scalar reference by a few ulps because of reassociated sums and fused
// multiply-adds; tests/test_kernels.cpp pins that bound.

#include <cstddef>
#include <string_view>
#include <vector>

namespace finr::kernels {

enum class Isa { scalar, avx2, neon };

struct KernelTable {
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y = W x + bias, W row-major rows x cols; bias may be null
  void (*gemv)(const double* w, std::size_t rows, std::size_t cols, const double* x,
               const double* bias, double* y);
  // out += W^T delta
  void (*gemv_t_acc)(const double* w, std::size_t rows, std::size_t cols, const double* delta,
                     double* out);
  // G += alpha * u v^T, G row-major rows x cols
  void (*ger)(double* g, std::size_t rows, std::size_t cols, double alpha, const double* u,
              const double* v);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = x * scale (elementwise)
  void (*mul)(const double* x, const double* scale, double* y, std::size_t n);
  // c = cos(2 pi t), s = sin(2 pi t); s may alias t
  void (*sincos_2pi)(const double* t, double* c, double* s, std::size_t n);
  // sum_i (a[i] - b[i])^2
  double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
  // One Adam update; bc1 = 1 - beta1^t, bc2 = 1 - beta2^t.
  void (*adam)(double* param, const double* grad, double* m, double* v, std::size_t n,
               double lr, double beta1, double beta2, double eps, double bc1, double bc2);
};

const KernelTable& scalar_table();
#if defined(FINR_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(FINR_HAVE_NEON)
const KernelTable& neon_table();
#endif

// The table currently in use.
const KernelTable& active();
Isa active_isa();

// ISAs compiled in and supported by this CPU (scalar is always first).
std::vector<Isa> available_isas();
const KernelTable& table_for(Isa isa);

// Throws InvalidArgument when the ISA is not available.
void set_isa(Isa isa);

std::string_view isa_name(Isa isa);
Isa parse_isa(std::string_view name);

}  // namespace finr::kernels
