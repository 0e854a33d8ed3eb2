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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <vector>

#include "finr/imaging.hpp"
#include "finr/network.hpp"

namespace finr {

// CSV exports cap infinite PSNR (zero error) at this value.
inline constexpr double kPsnrCap = 300.0;

// Pixels as (coordinate, target) pairs. grid_rows/grid_cols describe the
// sample lattice the pixels came from.
struct PixelSet {
  std::size_t d = 2;
  std::size_t channels = 1;
  std::size_t grid_rows = 0;
  std::size_t grid_cols = 0;
  std::vector<double> coords;   // count x d
  std::vector<double> targets;  // count x channels

  std::size_t count() const { return channels ? targets.size() / channels : 0; }
};

PixelSet all_pixels(const ImageGrid& image);

// Train: pixels whose row and column are both even. Test: every pixel.
std::pair<PixelSet, PixelSet> split_pixels(const ImageGrid& image);

// The train pixels of split_pixels as a standalone image.
ImageGrid train_grid(const ImageGrid& image);

double psnr_from_mse(double mse);
// -10 log10(MSE) over all entries; +infinity when identical.
double psnr(std::span<const double> pred, std::span<const double> target);
double psnr(const ImageGrid& pred, const ImageGrid& target);

enum class OptimizerKind { adam, sgd };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::adam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct TrainConfig {
  std::int64_t iterations = 2000;
  double learning_rate = 1e-3;
  OptimizerConfig optimizer;
  bool progressive = false;
  double end_fraction = 0.75;
  std::uint64_t seed = 0;
  // Pins the scalar kernels so runs are bit-identical across machines.
  bool deterministic = false;
  std::int64_t log_every = 25;

  void validate() const;
};

struct HistoryEntry {
  std::int64_t iteration = 0;
  double train_psnr = 0.0;
  double test_psnr = 0.0;
  double alpha = 0.0;

  bool operator==(const HistoryEntry&) const = default;
};

struct TrainRun {
  std::vector<HistoryEntry> history;
  NetworkParams params;
};

// Full-batch training: one optimizer step per pass over all train pixels.
// History holds metrics of the parameters *before* the update at each logged
// iteration (0, log_every, ...) plus a final entry at `iterations` after the
// last update. With progressive training the input mode becomes
// mapped_progressive and alpha follows alpha_schedule each iteration.
// Throws NumericalError (carrying the iteration) if the loss stops being finite.
TrainRun train(NetworkParams params, const PixelSet& train_set, const PixelSet& test_set,
               const TrainConfig& config);

// Mean squared error of the network over a pixel set.
double evaluate_mse(const NetworkParams& params, const PixelSet& pixels);

// "iteration,train_psnr,test_psnr,alpha" with PSNR capped at kPsnrCap.
void write_metrics_csv(const std::vector<HistoryEntry>& history, const std::filesystem::path& path);

}  // namespace finr
