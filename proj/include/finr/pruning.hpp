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

#include <vector>

#include "finr/lattice.hpp"
#include "finr/network.hpp"

namespace finr {

// pr(N, M): keep the lattice_size(d, N) most important rows of a perceptron
// trained on the B_M integer lattice.
struct PruneSpec {
  int N = 0;
  int M = 0;
};

// Per lattice row: Euclidean norm of its cosine and sine weights over every
// output channel. Requires a mapped perceptron.
std::vector<double> frequency_importance(const NetworkParams& perceptron);

// Top-n rows by importance, ties resolved toward the earlier canonical row.
// The result is a "pruned" matrix in canonical order with N = spec.N and
// provenance {spec.M, weights_hash}. Throws InvalidArgument when the network is
// not a perceptron over build_integer_lattice(d, spec.M) or n > m.
FrequencyMatrix prune(const NetworkParams& perceptron, const PruneSpec& spec);

// Sample standard deviation (n - 1 denominator) of all m*d entries.
double mapping_std(const FrequencyMatrix& b);

}  // namespace finr
