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


#include <algorithm>
#include <string>

#include "finr/cli_config.hpp"
#include "finr/error.hpp"
#include "finr/serialize.hpp"

namespace finr::cli {

using nlohmann::json;

namespace {

template <typename T>
void read(const json& j, const char* key, T& field) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    field = it->get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument(std::string("config key '") + key + "' has the wrong type");
  }
}

// A single string is accepted where a list is expected.
template <typename T>
void read_list(const json& j, const char* key, std::vector<T>& field) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    if (it->is_array()) {
      field = it->get<std::vector<T>>();
    } else {
      field = {it->get<T>()};
    }
  } catch (const json::exception&) {
    throw InvalidArgument(std::string("config key '") + key + "' has the wrong type");
  }
}

}  // namespace

json config_to_json(const ExperimentConfig& c) {
  return json{
      {"images", c.images},
      {"mapping", c.mapping},
      {"mapping_file", c.mapping_file},
      {"N", c.N},
      {"m", c.m},
      {"sigma", c.sigma},
      {"depth", c.depth},
      {"width", c.width},
      {"activation", c.activation},
      {"omega0", c.omega0},
      {"first_width", c.first_width},
      {"iterations", c.iterations},
      {"lr", c.lr},
      {"optimizer", c.optimizer},
      {"progressive", c.progressive},
      {"end_fraction", c.end_fraction},
      {"log_every", c.log_every},
      {"seed", c.seed},
      {"deterministic", c.deterministic},
      {"out", c.out},
      {"weight_init", c.weight_init},
      {"render_period", c.render_period},
      {"threshold", c.threshold},
      {"allow_even", c.allow_even},
      {"train_grid", c.train_grid},
      {"M", c.M},
      {"Ns", c.Ns},
      {"depths", c.depths},
      {"mappings", c.mappings},
      {"seeds", c.seeds},
      {"weights", c.weights},
      {"render_height", c.render_height},
      {"render_width", c.render_width},
      {"offset_x", c.offset_x},
      {"offset_y", c.offset_y},
  };
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  ExperimentConfig c;
  const json known = config_to_json(c);
  for (const auto& [key, value] : j.items()) {
    if (key == "image") continue;
    if (!known.contains(key)) throw InvalidArgument("unknown config key '" + key + "'");
  }
  read_list(j, "image", c.images);
  read_list(j, "images", c.images);
  read(j, "mapping", c.mapping);
  read(j, "mapping_file", c.mapping_file);
  read(j, "N", c.N);
  read(j, "m", c.m);
  read(j, "sigma", c.sigma);
  read(j, "depth", c.depth);
  read(j, "width", c.width);
  read(j, "activation", c.activation);
  read(j, "omega0", c.omega0);
  read(j, "first_width", c.first_width);
  read(j, "iterations", c.iterations);
  read(j, "lr", c.lr);
  read(j, "optimizer", c.optimizer);
  read(j, "progressive", c.progressive);
  read(j, "end_fraction", c.end_fraction);
  read(j, "log_every", c.log_every);
  read(j, "seed", c.seed);
  read(j, "deterministic", c.deterministic);
  read(j, "out", c.out);
  read(j, "weight_init", c.weight_init);
  read(j, "render_period", c.render_period);
  read(j, "threshold", c.threshold);
  read(j, "allow_even", c.allow_even);
  read(j, "train_grid", c.train_grid);
  read(j, "M", c.M);
  read_list(j, "Ns", c.Ns);
  read_list(j, "depths", c.depths);
  read_list(j, "mappings", c.mappings);
  read_list(j, "seeds", c.seeds);
  read(j, "weights", c.weights);
  read(j, "render_height", c.render_height);
  read(j, "render_width", c.render_width);
  read(j, "offset_x", c.offset_x);
  read(j, "offset_y", c.offset_y);
  return c;
}

TrainConfig train_config(const ExperimentConfig& c) {
  TrainConfig t;
  t.iterations = c.iterations;
  t.learning_rate = c.lr;
  if (c.optimizer == "adam") {
    t.optimizer.kind = OptimizerKind::adam;
  } else if (c.optimizer == "sgd") {
    t.optimizer.kind = OptimizerKind::sgd;
  } else {
    throw InvalidArgument("unknown optimizer '" + c.optimizer + "'");
  }
  t.progressive = c.progressive;
  t.end_fraction = c.end_fraction;
  t.seed = c.seed;
  t.deterministic = c.deterministic;
  t.log_every = c.log_every;
  t.validate();
  return t;
}

std::optional<FrequencyMatrix> build_mapping(const ExperimentConfig& c, const std::string& family,
                                             int N) {
  if (family == "none") return std::nullopt;
  if (N < 0) throw InvalidArgument("N must be >= 0");
  switch (parse_family(family)) {
    case MappingFamily::integer:
      return build_integer_lattice(2, N);
    case MappingFamily::gaussian: {
      if (c.m < 0) throw InvalidArgument("m must be >= 0");
      if (!(c.sigma > 0.0)) throw InvalidArgument("sigma must be > 0");
      const std::size_t m = c.m > 0 ? static_cast<std::size_t>(c.m) : lattice_size(2, N);
      return build_gaussian_mapping(2, m, c.sigma, c.seed);
    }
    case MappingFamily::positional:
      return build_positional_encoding(2, N);
    case MappingFamily::pruned: {
      if (c.mapping_file.empty()) throw InvalidArgument("pruned mapping needs --mapping-file");
      FrequencyMatrix b = load_frequency_matrix(c.mapping_file);
      if (b.d() != 2) throw InvalidArgument("pruned mapping must have d = 2");
      return b;
    }
  }
  throw InvalidArgument("unknown mapping family '" + family + "'");
}

NetworkSpec network_spec(const ExperimentConfig& c, std::optional<FrequencyMatrix> mapping,
                         Activation activation, int depth, std::size_t out_dim, int N) {
  if (depth < 0) throw InvalidArgument("depth must be >= 0");
  if (c.width < 1) throw InvalidArgument("width must be >= 1");
  if (c.first_width < 0) throw InvalidArgument("first_width must be >= 0");
  NetworkSpec spec;
  spec.input.d = 2;
  if (mapping) {
    spec.input.mode = InputMode::mapped;
    spec.input.b = std::move(*mapping);
  } else {
    spec.input.mode = InputMode::raw;
  }
  spec.depth = depth;
  spec.width = static_cast<std::size_t>(c.width);
  spec.activation = activation;
  spec.out_dim = out_dim;
  spec.omega0 = c.omega0;
  if (spec.input.mode == InputMode::raw && activation == Activation::sine) {
    spec.first_width = c.first_width > 0 ? static_cast<std::size_t>(c.first_width)
                                         : static_cast<std::size_t>(lattice_size(2, std::max(N, 0)));
  }
  if (spec.input.mode == InputMode::raw && activation == Activation::relu && depth == 0) {
    throw InvalidArgument("raw input with depth 0 is a linear model; use a mapping or depth > 0");
  }
  return spec;
}

}  // namespace finr::cli
