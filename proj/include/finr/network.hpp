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

// Coordinate networks: an optional Fourier input mapping followed by dense
// layers with identity, ReLU or sine activations.
//
// A Fourier mapped perceptron is a mapped input plus a single identity layer.
// A one-hidden-layer SIREN is a raw input, one sine layer and an identity
// output layer. Sine layers compute sin(omega0 * (W h + b)).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "finr/lattice.hpp"

namespace finr {

enum class Activation { identity, relu, sine };
enum class InputMode { raw, mapped, mapped_progressive };

std::string_view activation_name(Activation act);
Activation parse_activation(std::string_view name);
std::string_view input_mode_name(InputMode mode);
InputMode parse_input_mode(std::string_view name);

struct Layer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> w;  // out x in, row-major
  std::vector<double> b;  // out
  Activation act = Activation::identity;
  double omega0 = 1.0;    // sine layers only

  bool operator==(const Layer&) const = default;
};

struct InputMapping {
  InputMode mode = InputMode::raw;
  std::size_t d = 2;        // coordinate dimension
  FrequencyMatrix b;        // unused for raw input
  double alpha = 0.0;       // progressive gate, mapped_progressive only

  std::size_t feature_dim() const { return mode == InputMode::raw ? d : 2 * b.m(); }
  bool operator==(const InputMapping&) const = default;
};

struct NetworkParams {
  InputMapping input;
  std::vector<Layer> layers;

  std::size_t in_dim() const { return input.d; }
  std::size_t out_dim() const { return layers.empty() ? 0 : layers.back().out; }
  std::size_t parameter_count() const;

  // Mapped input and exactly one identity layer.
  bool is_mapped_perceptron() const;

  // Throws InvalidArgument if layer shapes do not chain.
  void validate() const;

  bool operator==(const NetworkParams&) const = default;
};

struct Gradients {
  std::vector<std::vector<double>> w;
  std::vector<std::vector<double>> b;

  static Gradients zeros_like(const NetworkParams& params);
  void clear();
};

// Scratch buffers reused across samples.
struct Workspace {
  std::vector<std::vector<double>> pre;   // pre-activations per layer
  std::vector<std::vector<double>> post;  // activations per layer
  std::vector<double> delta;
  std::vector<double> delta_prev;
  std::vector<double> features;
  std::vector<double> feature_scale;  // progressive weights duplicated over cos/sin

  explicit Workspace(const NetworkParams& params);
};

// Per-feature gates for mapped_progressive input (2m entries, empty otherwise).
std::vector<double> feature_scale(const InputMapping& input);

// Writes the first-layer input for coordinate x into out (feature_dim values).
// `scale` is the result of feature_scale() for the same mapping.
void compute_features(const InputMapping& input, std::span<const double> scale,
                      std::span<const double> x, std::span<double> out);

// Runs the layers on precomputed features; result stays in ws.post.back().
std::span<const double> forward_features(const NetworkParams& params,
                                         std::span<const double> features, Workspace& ws);

std::vector<double> forward(const NetworkParams& params, std::span<const double> x);

// Evaluates n coordinates (n x d row-major) into n x out_dim.
std::vector<double> forward_batch(const NetworkParams& params, std::span<const double> coords);

// Adds d(sum of squared errors)/d(theta) * grad_scale for one sample to grads
// and returns the sample's squared error. Throws NumericalError on NaN/Inf.
double accumulate_gradients(const NetworkParams& params, std::span<const double> features,
                            std::span<const double> target, double grad_scale, Gradients& grads,
                            Workspace& ws);

struct LossAndGradients {
  double loss = 0.0;  // mean over samples and channels
  Gradients grads;
};

// Mean-squared error and its exact gradient over a batch.
LossAndGradients backward(const NetworkParams& params, std::span<const double> coords,
                          std::span<const double> targets);

struct NetworkSpec {
  InputMapping input;
  int depth = 0;            // hidden layers between the input and the output layer
  std::size_t width = 32;
  Activation activation = Activation::relu;
  std::size_t out_dim = 1;
  double omega0 = 30.0;
  // Width of the leading sine layer for raw-input sine networks; 0 uses width.
  std::size_t first_width = 0;
};

// ReLU layers: W ~ U(+-sqrt(6/fan_in)), b = 0.
// Sine layers on raw coordinates: W, b ~ U(+-1/fan_in).
// Other sine layers: W ~ U(+-sqrt(6/fan_in)/omega0), b ~ U(+-1/sqrt(fan_in)).
// Identity output: W ~ U(+-sqrt(3/fan_in)), b = 0.
NetworkParams init_network(const NetworkSpec& spec, std::uint64_t seed);

// w is out_dim x 2m row-major. Throws InvalidArgument unless params is a mapped
// perceptron with matching shape.
NetworkParams set_output_weights(NetworkParams params, std::span<const double> w,
                                 std::span<const double> b);

}  // namespace finr
