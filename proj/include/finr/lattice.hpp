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

// Frequency matrices B (m rows x d columns) for the four input-mapping
// families. Integer-lattice rows follow a fixed lexicographic order; weight
// files, pruning masks and spectral coefficients all index rows that way.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace finr {

enum class MappingFamily { integer, gaussian, positional, pruned };

std::string_view family_name(MappingFamily family);
MappingFamily parse_family(std::string_view name);

// Largest row count build_integer_lattice will materialize.
inline constexpr std::uint64_t kMaxLatticeRows = std::uint64_t{1} << 24;

struct PruneProvenance {
  int source_M = 0;
  std::string source_weights_hash;

  bool operator==(const PruneProvenance&) const = default;
};

class FrequencyMatrix {
 public:
  FrequencyMatrix() = default;

  // rows is row-major m x d. Throws InvalidArgument if its size is not a
  // multiple of d, or (for integer-valued families) if an entry is not an
  // integer.
  FrequencyMatrix(MappingFamily family, std::size_t d, std::vector<double> rows);

  MappingFamily family() const { return family_; }
  std::size_t d() const { return d_; }
  std::size_t m() const { return d_ == 0 ? 0 : rows_.size() / d_; }
  std::span<const double> row(std::size_t i) const { return {rows_.data() + i * d_, d_}; }
  const std::vector<double>& data() const { return rows_; }
  bool integer_valued() const { return family_ != MappingFamily::gaussian; }

  std::optional<int> N;
  std::optional<double> sigma;
  std::optional<std::uint64_t> seed;
  std::optional<PruneProvenance> provenance;

  bool operator==(const FrequencyMatrix&) const = default;

 private:
  MappingFamily family_ = MappingFamily::integer;
  std::size_t d_ = 0;
  std::vector<double> rows_;
};

// (N+1)(2N+1)^(d-1) - sum_{l=0}^{d-2} N (2N+1)^l. Throws CapacityError when the
// count does not fit in 64 bits.
std::uint64_t lattice_size(int d, int N);

// True when the first nonzero entry of n is negative, i.e. n is in the
// exclusion set whose members duplicate the cos/sin basis of -n.
bool in_exclusion_set(std::span<const double> n);

// All n in {0..N} x {-N..N}^(d-1) outside the exclusion set, lexicographically
// sorted, DC row first.
FrequencyMatrix build_integer_lattice(int d, int N);

// m rows of i.i.d. N(0, sigma^2) entries.
FrequencyMatrix build_gaussian_mapping(int d, std::size_t m, double sigma, std::uint64_t seed);

// Rows 2^j e_k for every axis k and every 2^j <= N, axis-major.
FrequencyMatrix build_positional_encoding(int d, int N);

std::vector<double> frequency_norms(const FrequencyMatrix& b);

// Index of each row of `sub` inside `full` (both integer valued). Throws
// InvalidArgument if a row is missing.
std::vector<std::size_t> row_indices(const FrequencyMatrix& full, const FrequencyMatrix& sub);

}  // namespace finr
