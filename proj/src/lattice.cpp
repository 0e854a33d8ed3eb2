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

#include "finr/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "finr/error.hpp"
#include "finr/rng.hpp"

namespace finr {
namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw CapacityError("lattice size overflows 64 bits");
  return out;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw CapacityError("lattice size overflows 64 bits");
  return out;
}

}  // namespace

std::string_view family_name(MappingFamily family) {
  switch (family) {
    case MappingFamily::integer: return "integer";
    case MappingFamily::gaussian: return "gaussian";
    case MappingFamily::positional: return "positional";
    case MappingFamily::pruned: return "pruned";
  }
  return "unknown";
}

MappingFamily parse_family(std::string_view name) {
  if (name == "integer") return MappingFamily::integer;
  if (name == "gaussian") return MappingFamily::gaussian;
  if (name == "positional" || name == "pe") return MappingFamily::positional;
  if (name == "pruned") return MappingFamily::pruned;
  throw InvalidArgument("unknown mapping family: " + std::string(name));
}

FrequencyMatrix::FrequencyMatrix(MappingFamily family, std::size_t d, std::vector<double> rows)
    : family_(family), d_(d), rows_(std::move(rows)) {
  if (d_ == 0) throw InvalidArgument("frequency matrix needs d >= 1");
  if (rows_.size() % d_ != 0) throw InvalidArgument("frequency rows do not match d");
  if (integer_valued()) {
    for (double v : rows_) {
      if (v != std::nearbyint(v)) {
        throw InvalidArgument("non-integer entry in " + std::string(family_name(family)) +
                              " mapping");
      }
    }
  }
}

std::uint64_t lattice_size(int d, int N) {
  if (d < 1) throw InvalidArgument("lattice dimension must be >= 1");
  if (N < 0) throw InvalidArgument("lattice frequency must be >= 0");
  const std::uint64_t n = static_cast<std::uint64_t>(N);
  const std::uint64_t side = 2 * n + 1;
  std::uint64_t power = 1;  // (2N+1)^l
  std::uint64_t excluded = 0;
  for (int l = 0; l <= d - 2; ++l) {
    excluded = checked_add(excluded, checked_mul(n, power));
    power = checked_mul(power, side);
  }
  // power == (2N+1)^(d-1) here
  return checked_mul(n + 1, power) - excluded;
}

bool in_exclusion_set(std::span<const double> n) {
  for (double v : n) {
    if (v != 0.0) return v < 0.0;
  }
  return false;
}

FrequencyMatrix build_integer_lattice(int d, int N) {
  const std::uint64_t m = lattice_size(d, N);
  if (m > kMaxLatticeRows) {
    throw CapacityError("integer lattice with d=" + std::to_string(d) + ", N=" +
                        std::to_string(N) + " has " + std::to_string(m) +
                        " rows, above the limit of " + std::to_string(kMaxLatticeRows));
  }
  const auto dim = static_cast<std::size_t>(d);
  std::vector<double> rows;
  rows.reserve(static_cast<std::size_t>(m) * dim);

  // Odometer over {0..N} x {-N..N}^(d-1); the last axis varies fastest, so the
  // visiting order is already lexicographic.
  std::vector<int> n(dim, -N);
  n[0] = 0;
  std::vector<double> as_double(dim);
  while (true) {
    std::copy(n.begin(), n.end(), as_double.begin());
    if (!in_exclusion_set(as_double)) rows.insert(rows.end(), as_double.begin(), as_double.end());
    int axis = static_cast<int>(dim) - 1;
    for (; axis >= 0; --axis) {
      if (n[axis] < N) {
        ++n[axis];
        break;
      }
      n[axis] = axis == 0 ? 0 : -N;
    }
    if (axis < 0) break;
  }

  FrequencyMatrix out(MappingFamily::integer, dim, std::move(rows));
  out.N = N;
  return out;
}

FrequencyMatrix build_gaussian_mapping(int d, std::size_t m, double sigma, std::uint64_t seed) {
  if (d < 1) throw InvalidArgument("mapping dimension must be >= 1");
  if (m < 1) throw InvalidArgument("gaussian mapping needs m >= 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument("gaussian mapping needs sigma > 0");
  }
  Rng rng(seed);
  std::vector<double> rows(m * static_cast<std::size_t>(d));
  for (double& v : rows) v = sigma * rng.normal();
  FrequencyMatrix out(MappingFamily::gaussian, static_cast<std::size_t>(d), std::move(rows));
  out.sigma = sigma;
  out.seed = seed;
  return out;
}

FrequencyMatrix build_positional_encoding(int d, int N) {
  if (d < 1) throw InvalidArgument("mapping dimension must be >= 1");
  if (N < 1) throw InvalidArgument("positional encoding needs N >= 1");
  const auto dim = static_cast<std::size_t>(d);
  std::vector<double> rows;
  for (std::size_t axis = 0; axis < dim; ++axis) {
    for (long long f = 1; f <= N; f *= 2) {
      std::vector<double> row(dim, 0.0);
      row[axis] = static_cast<double>(f);
      rows.insert(rows.end(), row.begin(), row.end());
    }
  }
  FrequencyMatrix out(MappingFamily::positional, dim, std::move(rows));
  out.N = N;
  return out;
}

std::vector<double> frequency_norms(const FrequencyMatrix& b) {
  std::vector<double> norms(b.m());
  for (std::size_t i = 0; i < b.m(); ++i) {
    double acc = 0.0;
    for (double v : b.row(i)) acc += v * v;
    norms[i] = std::sqrt(acc);
  }
  return norms;
}

std::vector<std::size_t> row_indices(const FrequencyMatrix& full, const FrequencyMatrix& sub) {
  if (full.d() != sub.d()) throw InvalidArgument("row_indices: dimension mismatch");
  std::map<std::vector<double>, std::size_t> index;
  for (std::size_t i = 0; i < full.m(); ++i) {
    auto r = full.row(i);
    index.emplace(std::vector<double>(r.begin(), r.end()), i);
  }
  std::vector<std::size_t> out;
  out.reserve(sub.m());
  for (std::size_t i = 0; i < sub.m(); ++i) {
    auto r = sub.row(i);
    auto it = index.find(std::vector<double>(r.begin(), r.end()));
    if (it == index.end()) throw InvalidArgument("row_indices: row not present in source");
    out.push_back(it->second);
  }
  return out;
}

}  // namespace finr
