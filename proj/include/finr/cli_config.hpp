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

// Experiment configuration shared by every subcommand. A JSON config file
// uses the long flag names as keys (dashes become underscores); flags given on
// the command line override the file. Unknown keys are rejected.

#include <cstdint>
#include <optional>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "finr/lattice.hpp"
#include "finr/network.hpp"
#include "finr/training.hpp"

namespace finr::cli {

struct ExperimentConfig {
  std::vector<std::string> images;

  // integer | gaussian | pe | pruned | none
  std::string mapping = "integer";
  std::string mapping_file;  // pruned mapping JSON
  int N = 8;
  int m = 0;  // gaussian row count; 0 means lattice_size(2, N)
  double sigma = 10.0;

  int depth = 0;
  int width = 32;
  std::string activation = "relu";
  double omega0 = 30.0;
  int first_width = 0;  // raw-input sine layer; 0 means lattice_size(2, N)

  std::int64_t iterations = 2000;
  double lr = 1e-3;
  std::string optimizer = "adam";
  bool progressive = false;
  double end_fraction = 0.75;
  std::int64_t log_every = 25;
  std::uint64_t seed = 0;
  bool deterministic = false;

  std::string out = "out";

  // fit
  std::string weight_init = "none";  // none | fft
  bool render_period = false;        // also render f(x + 1, y + 1)

  // init-check
  double threshold = 140.0;
  bool allow_even = false;
  std::string train_grid = "full";  // full | split

  // prune
  int M = 128;

  // compare
  std::vector<int> Ns;
  std::vector<int> depths;
  std::vector<std::string> mappings;
  std::vector<std::uint64_t> seeds;

  // render
  std::string weights;
  int render_height = 0;
  int render_width = 0;
  double offset_x = 0.0;
  double offset_y = 0.0;
};

nlohmann::json config_to_json(const ExperimentConfig& config);
// Starts from the defaults; throws InvalidArgument on unknown keys or bad types.
ExperimentConfig config_from_json(const nlohmann::json& j);

TrainConfig train_config(const ExperimentConfig& config);

// Frequency matrix for a mapping family name at frequency N (d = 2). Returns
// an empty optional for "none". "pruned" loads config.mapping_file.
std::optional<FrequencyMatrix> build_mapping(const ExperimentConfig& config,
                                             const std::string& family, int N);

NetworkSpec network_spec(const ExperimentConfig& config, std::optional<FrequencyMatrix> mapping,
                         Activation activation, int depth, std::size_t out_dim, int N);

}  // namespace finr::cli
