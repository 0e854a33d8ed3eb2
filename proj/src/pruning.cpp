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

#include "finr/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "finr/error.hpp"
#include "finr/serialize.hpp"

namespace finr {

std::vector<double> frequency_importance(const NetworkParams& perceptron) {
  if (!perceptron.is_mapped_perceptron()) {
    throw InvalidArgument("frequency importance needs a mapped perceptron");
  }
  const Layer& l = perceptron.layers[0];
  const std::size_t m = perceptron.input.b.m();
  std::vector<double> importance(m, 0.0);
  for (std::size_t o = 0; o < l.out; ++o) {
    const double* row = l.w.data() + o * l.in;
    for (std::size_t i = 0; i < m; ++i) importance[i] += row[i] * row[i] + row[m + i] * row[m + i];
  }
  for (double& v : importance) v = std::sqrt(v);
  return importance;
}

FrequencyMatrix prune(const NetworkParams& perceptron, const PruneSpec& spec) {
  if (spec.N < 0 || spec.M < spec.N) throw InvalidArgument("pruning needs M >= N >= 0");
  const FrequencyMatrix& source = perceptron.input.b;
  if (perceptron.input.mode == InputMode::raw || source.family() != MappingFamily::integer ||
      source.N != spec.M) {
    throw InvalidArgument("pruning source must be a perceptron over the integer lattice B_M");
  }
  const auto d = static_cast<int>(source.d());
  const std::uint64_t n = lattice_size(d, spec.N);
  const std::size_t m = source.m();
  if (n > m) throw InvalidArgument("pruning target larger than the source lattice");

  const auto importance = frequency_importance(perceptron);
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return importance[a] > importance[b]; });
  order.resize(static_cast<std::size_t>(n));
  std::sort(order.begin(), order.end());

  std::vector<double> rows;
  rows.reserve(order.size() * source.d());
  for (std::size_t i : order) {
    const auto r = source.row(i);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  FrequencyMatrix out(MappingFamily::pruned, source.d(), std::move(rows));
  out.N = spec.N;
  out.provenance = PruneProvenance{spec.M, weights_hash(perceptron)};
  return out;
}

double mapping_std(const FrequencyMatrix& b) {
  if (b.m() < 2) throw InvalidArgument("mapping_std needs at least two rows");
  const auto& v = b.data();
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

}  // namespace finr
