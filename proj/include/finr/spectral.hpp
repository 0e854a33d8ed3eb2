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

// Fourier-series coefficients of sampled 2-D grids.
//
// A grid with R rows and C columns samples f at x = (col / C, row / R), so the
// DFT bin (ky, kx) holds R*C times the series coefficient c_n with
// n = (kx, ky) taken modulo the grid. Coefficients are stored against the
// integer lattice in its canonical order as cosine/sine amplitudes
// a_n = 2 Re c_n and b_n = -2 Im c_n (a_0 = c_0).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "finr/lattice.hpp"

namespace finr {

using cdouble = std::complex<double>;

struct RealGrid {
  std::size_t rows = 0;  // y axis
  std::size_t cols = 0;  // x axis
  std::vector<double> values;

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

struct Spectrum {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<cdouble> bins;  // bins[ky * cols + kx]

  const cdouble& at(std::size_t ky, std::size_t kx) const { return bins[ky * cols + kx]; }
};

// Unnormalized DFT of any length: sum_j x_j exp(-+2 pi i jk / n); the inverse
// flag flips the sign only. Mixed radix, with Bluestein for prime factors > 31.
std::vector<cdouble> fft(std::span<const cdouble> x, bool inverse = false);

// Forward 2-D DFT, X[k] = sum_j f[j] exp(-2 pi i k.j / S).
Spectrum fft2_real(const RealGrid& grid);

// Inverse 2-D DFT including the 1/(R*C) factor.
std::vector<cdouble> ifft2(const Spectrum& spectrum);

struct SpectralCoefficients {
  int N = 0;
  std::size_t grid_rows = 0;
  std::size_t grid_cols = 0;
  FrequencyMatrix lattice;  // integer lattice, d = 2
  std::vector<double> a;    // cosine amplitudes per lattice row
  std::vector<double> b;    // sine amplitudes per lattice row (0 for DC)
};

// Requires both grid dimensions >= 2N. When a DFT bin is reachable from more
// than one lattice row (even grids at |n_k| = S_k/2), the first row in canonical
// order takes the whole bin and later rows get zero; a self-conjugate bin
// contributes a_n = c_n rather than 2 Re c_n. Reconstruction at the sample
// points is exact in both cases.
SpectralCoefficients coefficients_from_grid(const RealGrid& grid, int N);

struct OutputWeights {
  std::vector<double> w;  // 2m: cosines then sines
  double bias = 0.0;
};

OutputWeights weights_from_coefficients(const SpectralCoefficients& coeffs);

// Truncated series sum_n a_n cos(2 pi n.x) + b_n sin(2 pi n.x) evaluated
// directly with std::cos/std::sin.
double synthesize(const SpectralCoefficients& coeffs, std::span<const double> x);

// Places the coefficients back into a rows x cols spectrum and inverts it.
RealGrid grid_from_coefficients(const SpectralCoefficients& coeffs, std::size_t rows,
                                std::size_t cols);

}  // namespace finr
