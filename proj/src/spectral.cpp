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

#include "finr/spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "finr/error.hpp"

namespace finr {
namespace {

constexpr std::size_t kDirectPrimeLimit = 31;

// exp(sign * 2 pi i * num / den) with the angle reduced in integers first.
cdouble unit_root(long long num, long long den, double sign) {
  num %= den;
  if (num < 0) num += den;
  const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(num) /
                       static_cast<double>(den);
  return {std::cos(angle), std::sin(angle)};
}

std::size_t smallest_factor(std::size_t n) {
  if (n % 2 == 0) return 2;
  for (std::size_t p = 3; p * p <= n; p += 2) {
    if (n % p == 0) return p;
  }
  return n;
}

std::vector<cdouble> transform(std::vector<cdouble> x, double sign);

std::vector<cdouble> direct_dft(const std::vector<cdouble>& x, double sign) {
  const std::size_t n = x.size();
  std::vector<cdouble> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cdouble acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      acc += x[j] * unit_root(static_cast<long long>(j * k % n), static_cast<long long>(n), sign);
    }
    out[k] = acc;
  }
  return out;
}

// Chirp-z: jk = (j^2 + k^2 - (k-j)^2) / 2 turns the DFT into a convolution of
// power-of-two length.
std::vector<cdouble> bluestein(const std::vector<cdouble>& x, double sign) {
  const std::size_t n = x.size();
  std::size_t len = 1;
  while (len < 2 * n - 1) len *= 2;
  const auto n2 = static_cast<long long>(2 * n);
  std::vector<cdouble> chirp(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto jj = static_cast<long long>((j * j) % (2 * n));
    chirp[j] = unit_root(jj, n2, sign);  // exp(sign pi i j^2 / n)
  }
  std::vector<cdouble> a(len, 0.0);
  std::vector<cdouble> b(len, 0.0);
  for (std::size_t j = 0; j < n; ++j) a[j] = x[j] * chirp[j];
  b[0] = std::conj(chirp[0]);
  for (std::size_t j = 1; j < n; ++j) b[j] = b[len - j] = std::conj(chirp[j]);
  auto fa = transform(std::move(a), -1.0);
  const auto fb = transform(std::move(b), -1.0);
  for (std::size_t i = 0; i < len; ++i) fa[i] *= fb[i];
  auto conv = transform(std::move(fa), 1.0);
  std::vector<cdouble> out(n);
  const double scale = 1.0 / static_cast<double>(len);
  for (std::size_t k = 0; k < n; ++k) out[k] = chirp[k] * conv[k] * scale;
  return out;
}

// Decimation in time on the smallest prime factor p: p interleaved
// sub-transforms of length n/p, recombined with O(n p) twiddles.
std::vector<cdouble> transform(std::vector<cdouble> x, double sign) {
  const std::size_t n = x.size();
  if (n <= 1) return x;
  const std::size_t p = smallest_factor(n);
  if (p == n) return n <= kDirectPrimeLimit ? direct_dft(x, sign) : bluestein(x, sign);

  const std::size_t q = n / p;
  std::vector<std::vector<cdouble>> sub(p, std::vector<cdouble>(q));
  for (std::size_t j = 0; j < q; ++j) {
    for (std::size_t r = 0; r < p; ++r) sub[r][j] = x[j * p + r];
  }
  for (auto& s : sub) s = transform(std::move(s), sign);

  std::vector<cdouble> roots(n);
  for (std::size_t j = 0; j < n; ++j) {
    roots[j] = unit_root(static_cast<long long>(j), static_cast<long long>(n), sign);
  }
  std::vector<cdouble> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cdouble acc = sub[0][k % q];
    for (std::size_t r = 1; r < p; ++r) acc += roots[(r * k) % n] * sub[r][k % q];
    out[k] = acc;
  }
  return out;
}

std::vector<cdouble> transform_2d(std::vector<cdouble> data, std::size_t rows, std::size_t cols,
                                  double sign) {
  std::vector<cdouble> line(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(r * cols), cols, line.begin());
    const auto t = transform(line, sign);
    std::copy(t.begin(), t.end(), data.begin() + static_cast<std::ptrdiff_t>(r * cols));
  }
  line.resize(rows);
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) line[r] = data[r * cols + c];
    const auto t = transform(line, sign);
    for (std::size_t r = 0; r < rows; ++r) data[r * cols + c] = t[r];
  }
  return data;
}

std::size_t wrap(long long k, std::size_t n) {
  const auto s = static_cast<long long>(n);
  return static_cast<std::size_t>(((k % s) + s) % s);
}

}  // namespace

std::vector<cdouble> fft(std::span<const cdouble> x, bool inverse) {
  return transform(std::vector<cdouble>(x.begin(), x.end()), inverse ? 1.0 : -1.0);
}

Spectrum fft2_real(const RealGrid& grid) {
  if (grid.rows == 0 || grid.cols == 0 || grid.values.size() != grid.rows * grid.cols) {
    throw InvalidArgument("fft2_real: grid must be non-empty and rows*cols sized");
  }
  std::vector<cdouble> data(grid.values.begin(), grid.values.end());
  return {grid.rows, grid.cols, transform_2d(std::move(data), grid.rows, grid.cols, -1.0)};
}

std::vector<cdouble> ifft2(const Spectrum& spectrum) {
  auto out = transform_2d(spectrum.bins, spectrum.rows, spectrum.cols, 1.0);
  const double scale = 1.0 / static_cast<double>(spectrum.rows * spectrum.cols);
  for (auto& v : out) v *= scale;
  return out;
}

SpectralCoefficients coefficients_from_grid(const RealGrid& grid, int N) {
  if (N < 0) throw InvalidArgument("coefficients_from_grid: N must be >= 0");
  const auto need = 2 * static_cast<std::size_t>(N);
  if (grid.rows < need || grid.cols < need) {
    throw InvalidArgument("coefficients_from_grid: grid " + std::to_string(grid.rows) + "x" +
                          std::to_string(grid.cols) + " is below the Nyquist rate for N=" +
                          std::to_string(N));
  }
  const Spectrum spectrum = fft2_real(grid);
  const double scale = 1.0 / static_cast<double>(grid.rows * grid.cols);

  SpectralCoefficients out;
  out.N = N;
  out.grid_rows = grid.rows;
  out.grid_cols = grid.cols;
  out.lattice = build_integer_lattice(2, N);
  const std::size_t m = out.lattice.m();
  out.a.assign(m, 0.0);
  out.b.assign(m, 0.0);

  std::vector<bool> covered(grid.rows * grid.cols, false);
  for (std::size_t i = 0; i < m; ++i) {
    const auto row = out.lattice.row(i);
    const auto nx = static_cast<long long>(row[0]);
    const auto ny = static_cast<long long>(row[1]);
    const std::size_t bin = wrap(ny, grid.rows) * grid.cols + wrap(nx, grid.cols);
    const std::size_t mirror = wrap(-ny, grid.rows) * grid.cols + wrap(-nx, grid.cols);
    if (covered[bin]) continue;
    const cdouble c = spectrum.bins[bin] * scale;
    if (bin == mirror) {
      out.a[i] = c.real();
    } else {
      out.a[i] = 2.0 * c.real();
      out.b[i] = -2.0 * c.imag();
    }
    covered[bin] = true;
    covered[mirror] = true;
  }
  return out;
}

OutputWeights weights_from_coefficients(const SpectralCoefficients& coeffs) {
  OutputWeights out;
  out.w.reserve(coeffs.a.size() + coeffs.b.size());
  out.w.insert(out.w.end(), coeffs.a.begin(), coeffs.a.end());
  out.w.insert(out.w.end(), coeffs.b.begin(), coeffs.b.end());
  return out;
}

double synthesize(const SpectralCoefficients& coeffs, std::span<const double> x) {
  const std::size_t d = coeffs.lattice.d();
  if (x.size() != d) throw InvalidArgument("synthesize: dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < coeffs.lattice.m(); ++i) {
    const auto row = coeffs.lattice.row(i);
    double t = 0.0;
    for (std::size_t k = 0; k < d; ++k) t += row[k] * x[k];
    const double angle = 2.0 * std::numbers::pi * t;
    acc += coeffs.a[i] * std::cos(angle) + coeffs.b[i] * std::sin(angle);
  }
  return acc;
}

RealGrid grid_from_coefficients(const SpectralCoefficients& coeffs, std::size_t rows,
                                std::size_t cols) {
  if (coeffs.lattice.d() != 2) throw InvalidArgument("grid_from_coefficients: needs d = 2");
  Spectrum spectrum{rows, cols, std::vector<cdouble>(rows * cols, 0.0)};
  for (std::size_t i = 0; i < coeffs.lattice.m(); ++i) {
    const auto row = coeffs.lattice.row(i);
    const auto nx = static_cast<long long>(row[0]);
    const auto ny = static_cast<long long>(row[1]);
    const cdouble c(coeffs.a[i] / 2.0, -coeffs.b[i] / 2.0);
    if (nx == 0 && ny == 0) {
      spectrum.bins[0] += coeffs.a[i];
      continue;
    }
    spectrum.bins[wrap(ny, rows) * cols + wrap(nx, cols)] += c;
    spectrum.bins[wrap(-ny, rows) * cols + wrap(-nx, cols)] += std::conj(c);
  }
  for (auto& v : spectrum.bins) v *= static_cast<double>(rows * cols);
  const auto values = ifft2(spectrum);
  RealGrid out{rows, cols, std::vector<double>(rows * cols)};
  for (std::size_t i = 0; i < values.size(); ++i) out.values[i] = values[i].real();
  return out;
}

}  // namespace finr
