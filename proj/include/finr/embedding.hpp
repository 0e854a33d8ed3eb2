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

// The Fourier feature map gamma(x) = (cos(2 pi B x), sin(2 pi B x)), its
// coarse-to-fine weighted variant, and the equivalent sine-layer form
// W sin(2 pi C x + phi) + b with C = (B; B), phi = (pi/2 .. pi/2, 0 .. 0).

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "finr/lattice.hpp"

namespace finr {

// 2m values: cosines first, then sines, both in B's row order.
struct Embedding {
  std::vector<double> values;
  std::size_t m = 0;

  std::span<const double> cos() const { return {values.data(), m}; }
  std::span<const double> sin() const { return {values.data() + m, m}; }
};

Embedding embed(std::span<const double> x, const FrequencyMatrix& b);

// Writes gamma(x) into out (size 2m) through the active kernel table.
void embed_into(std::span<const double> x, const FrequencyMatrix& b, std::span<double> out);

// w_alpha(z): 0 below the gate, raised-cosine ramp over one unit, then 1.
double progressive_weight(double alpha, double z);

// w_alpha applied to each entry of `norms`.
std::vector<double> progressive_weights(double alpha, std::span<const double> norms);

struct ProgressiveState {
  double alpha = 0.0;
  double alpha_max = 0.0;
  double end_fraction = 0.75;

  // alpha = 0 and alpha_max = largest Euclidean row norm of b.
  static ProgressiveState for_mapping(const FrequencyMatrix& b, double end_fraction = 0.75);
};

Embedding embed_progressive(std::span<const double> x, const FrequencyMatrix& b,
                            const ProgressiveState& state);

// alpha = alpha_max * min(1, iteration / (end_fraction * total_iterations)).
ProgressiveState alpha_schedule(std::int64_t iteration, std::int64_t total_iterations,
                                ProgressiveState state);

struct SirenForm {
  std::size_t d = 0;
  std::size_t m = 0;
  std::size_t out_dim = 0;
  std::vector<double> c;    // 2m x d
  std::vector<double> phi;  // 2m
  std::vector<double> w;    // out_dim x 2m
  std::vector<double> b;    // out_dim
};

// w is out_dim x 2m row-major with columns in B's embedding layout.
SirenForm to_siren_form(std::span<const double> w, std::span<const double> bias,
                        const FrequencyMatrix& b);

// W sin(2 pi C x + phi) + b, evaluated with std::sin.
std::vector<double> evaluate_siren_form(const SirenForm& form, std::span<const double> x);

}  // namespace finr
