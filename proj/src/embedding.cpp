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

#include "finr/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "finr/error.hpp"
#include "finr/kernels.hpp"

namespace finr {

void embed_into(std::span<const double> x, const FrequencyMatrix& b, std::span<double> out) {
  const std::size_t d = b.d();
  const std::size_t m = b.m();
  if (x.size() != d) {
    throw InvalidArgument("embed: coordinate has " + std::to_string(x.size()) +
                          " entries, mapping expects " + std::to_string(d));
  }
  if (out.size() != 2 * m) throw InvalidArgument("embed: output buffer must hold 2m values");
  // Phases land in the sine half and are overwritten in place.
  double* phase = out.data() + m;
  const double* rows = b.data().data();
  for (std::size_t i = 0; i < m; ++i) {
    double t = 0.0;
    for (std::size_t k = 0; k < d; ++k) t += rows[i * d + k] * x[k];
    phase[i] = t;
  }
  kernels::active().sincos_2pi(phase, out.data(), phase, m);
}

Embedding embed(std::span<const double> x, const FrequencyMatrix& b) {
  Embedding e;
  e.m = b.m();
  e.values.resize(2 * e.m);
  embed_into(x, b, e.values);
  return e;
}

double progressive_weight(double alpha, double z) {
  const double gap = alpha - z;
  if (gap < 0.0) return 0.0;
  if (gap > 1.0) return 1.0;
  return (1.0 - std::cos(gap * std::numbers::pi)) / 2.0;
}

std::vector<double> progressive_weights(double alpha, std::span<const double> norms) {
  std::vector<double> w(norms.size());
  std::transform(norms.begin(), norms.end(), w.begin(),
                 [alpha](double z) { return progressive_weight(alpha, z); });
  return w;
}

ProgressiveState ProgressiveState::for_mapping(const FrequencyMatrix& b, double end_fraction) {
  if (!(end_fraction > 0.0 && end_fraction <= 1.0)) {
    throw InvalidArgument("progressive end_fraction must be in (0, 1]");
  }
  ProgressiveState state;
  const auto norms = frequency_norms(b);
  state.alpha_max = norms.empty() ? 0.0 : *std::max_element(norms.begin(), norms.end());
  state.end_fraction = end_fraction;
  return state;
}

Embedding embed_progressive(std::span<const double> x, const FrequencyMatrix& b,
                            const ProgressiveState& state) {
  Embedding e = embed(x, b);
  const auto norms = frequency_norms(b);
  for (std::size_t i = 0; i < e.m; ++i) {
    const double w = progressive_weight(state.alpha, norms[i]);
    e.values[i] *= w;
    e.values[e.m + i] *= w;
  }
  return e;
}

ProgressiveState alpha_schedule(std::int64_t iteration, std::int64_t total_iterations,
                                ProgressiveState state) {
  if (total_iterations <= 0) throw InvalidArgument("alpha_schedule: total_iterations must be > 0");
  if (iteration < 0 || iteration > total_iterations) {
    throw InvalidArgument("alpha_schedule: iteration outside [0, total_iterations]");
  }
  const double ramp_end = state.end_fraction * static_cast<double>(total_iterations);
  state.alpha = state.alpha_max * std::min(1.0, static_cast<double>(iteration) / ramp_end);
  return state;
}

SirenForm to_siren_form(std::span<const double> w, std::span<const double> bias,
                        const FrequencyMatrix& b) {
  const std::size_t m = b.m();
  const std::size_t d = b.d();
  if (m == 0 || w.size() % (2 * m) != 0 || w.size() / (2 * m) != bias.size()) {
    throw InvalidArgument("to_siren_form: weights must be out_dim x 2m with out_dim biases");
  }
  SirenForm form;
  form.d = d;
  form.m = m;
  form.out_dim = bias.size();
  form.c.reserve(2 * m * d);
  form.c.insert(form.c.end(), b.data().begin(), b.data().end());
  form.c.insert(form.c.end(), b.data().begin(), b.data().end());
  form.phi.assign(2 * m, 0.0);
  std::fill(form.phi.begin(), form.phi.begin() + static_cast<std::ptrdiff_t>(m),
            std::numbers::pi / 2.0);
  form.w.assign(w.begin(), w.end());
  form.b.assign(bias.begin(), bias.end());
  return form;
}

std::vector<double> evaluate_siren_form(const SirenForm& form, std::span<const double> x) {
  if (x.size() != form.d) throw InvalidArgument("evaluate_siren_form: dimension mismatch");
  std::vector<double> hidden(2 * form.m);
  for (std::size_t i = 0; i < 2 * form.m; ++i) {
    double t = 0.0;
    for (std::size_t k = 0; k < form.d; ++k) t += form.c[i * form.d + k] * x[k];
    hidden[i] = std::sin(2.0 * std::numbers::pi * t + form.phi[i]);
  }
  std::vector<double> y(form.b);
  for (std::size_t o = 0; o < form.out_dim; ++o) {
    for (std::size_t i = 0; i < 2 * form.m; ++i) y[o] += form.w[o * 2 * form.m + i] * hidden[i];
  }
  return y;
}

}  // namespace finr
