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

#include "finr/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "finr/embedding.hpp"
#include "finr/error.hpp"
#include "finr/kernels.hpp"
#include "finr/rng.hpp"

namespace finr {

std::string_view activation_name(Activation act) {
  switch (act) {
    case Activation::identity: return "identity";
    case Activation::relu: return "relu";
    case Activation::sine: return "sine";
  }
  return "unknown";
}

Activation parse_activation(std::string_view name) {
  if (name == "identity") return Activation::identity;
  if (name == "relu") return Activation::relu;
  if (name == "sine") return Activation::sine;
  throw InvalidArgument("unknown activation: " + std::string(name));
}

std::string_view input_mode_name(InputMode mode) {
  switch (mode) {
    case InputMode::raw: return "raw";
    case InputMode::mapped: return "mapped";
    case InputMode::mapped_progressive: return "mapped_progressive";
  }
  return "unknown";
}

InputMode parse_input_mode(std::string_view name) {
  if (name == "raw") return InputMode::raw;
  if (name == "mapped") return InputMode::mapped;
  if (name == "mapped_progressive") return InputMode::mapped_progressive;
  throw InvalidArgument("unknown input mode: " + std::string(name));
}

std::size_t NetworkParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.w.size() + l.b.size();
  return n;
}

bool NetworkParams::is_mapped_perceptron() const {
  return input.mode != InputMode::raw && layers.size() == 1 &&
         layers[0].act == Activation::identity;
}

void NetworkParams::validate() const {
  if (layers.empty()) throw InvalidArgument("network has no layers");
  if (input.mode != InputMode::raw && input.b.d() != input.d) {
    throw InvalidArgument("mapping dimension does not match input dimension");
  }
  std::size_t width = input.feature_dim();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const Layer& l = layers[i];
    if (l.in != width || l.w.size() != l.in * l.out || l.b.size() != l.out) {
      throw InvalidArgument("layer " + std::to_string(i) + " shape does not chain");
    }
    width = l.out;
  }
}

Gradients Gradients::zeros_like(const NetworkParams& params) {
  Gradients g;
  for (const auto& l : params.layers) {
    g.w.emplace_back(l.w.size(), 0.0);
    g.b.emplace_back(l.b.size(), 0.0);
  }
  return g;
}

void Gradients::clear() {
  for (auto& v : w) std::fill(v.begin(), v.end(), 0.0);
  for (auto& v : b) std::fill(v.begin(), v.end(), 0.0);
}

Workspace::Workspace(const NetworkParams& params) {
  std::size_t widest = params.input.feature_dim();
  for (const auto& l : params.layers) {
    pre.emplace_back(l.out);
    post.emplace_back(l.out);
    widest = std::max(widest, l.out);
  }
  delta.resize(widest);
  delta_prev.resize(widest);
  features.resize(params.input.feature_dim());
  feature_scale = finr::feature_scale(params.input);
}

std::vector<double> feature_scale(const InputMapping& input) {
  if (input.mode != InputMode::mapped_progressive) return {};
  const auto norms = frequency_norms(input.b);
  const std::size_t m = norms.size();
  std::vector<double> scale(2 * m);
  for (std::size_t i = 0; i < m; ++i) scale[i] = scale[m + i] = progressive_weight(input.alpha, norms[i]);
  return scale;
}

void compute_features(const InputMapping& input, std::span<const double> scale,
                      std::span<const double> x, std::span<double> out) {
  if (x.size() != input.d) {
    throw InvalidArgument("coordinate has " + std::to_string(x.size()) + " entries, network expects " +
                          std::to_string(input.d));
  }
  if (input.mode == InputMode::raw) {
    std::copy(x.begin(), x.end(), out.begin());
    return;
  }
  embed_into(x, input.b, out);
  if (input.mode == InputMode::mapped_progressive) {
    kernels::active().mul(out.data(), scale.data(), out.data(), out.size());
  }
}

std::span<const double> forward_features(const NetworkParams& params,
                                         std::span<const double> features, Workspace& ws) {
  const auto& k = kernels::active();
  const double* h = features.data();
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    const Layer& l = params.layers[i];
    auto& z = ws.pre[i];
    auto& a = ws.post[i];
    k.gemv(l.w.data(), l.out, l.in, h, l.b.data(), z.data());
    switch (l.act) {
      case Activation::identity:
        std::copy(z.begin(), z.end(), a.begin());
        break;
      case Activation::relu:
        for (std::size_t j = 0; j < l.out; ++j) a[j] = z[j] > 0.0 ? z[j] : 0.0;
        break;
      case Activation::sine:
        for (std::size_t j = 0; j < l.out; ++j) a[j] = std::sin(l.omega0 * z[j]);
        break;
    }
    h = a.data();
  }
  return ws.post.back();
}

std::vector<double> forward(const NetworkParams& params, std::span<const double> x) {
  params.validate();
  Workspace ws(params);
  compute_features(params.input, ws.feature_scale, x, ws.features);
  const auto y = forward_features(params, ws.features, ws);
  return {y.begin(), y.end()};
}

std::vector<double> forward_batch(const NetworkParams& params, std::span<const double> coords) {
  params.validate();
  const std::size_t d = params.in_dim();
  if (coords.size() % d != 0) throw InvalidArgument("forward_batch: coordinates not a multiple of d");
  const std::size_t n = coords.size() / d;
  const std::size_t out_dim = params.out_dim();
  Workspace ws(params);
  std::vector<double> out(n * out_dim);
  for (std::size_t i = 0; i < n; ++i) {
    compute_features(params.input, ws.feature_scale, coords.subspan(i * d, d), ws.features);
    const auto y = forward_features(params, ws.features, ws);
    std::copy(y.begin(), y.end(), out.begin() + static_cast<std::ptrdiff_t>(i * out_dim));
  }
  return out;
}

double accumulate_gradients(const NetworkParams& params, std::span<const double> features,
                            std::span<const double> target, double grad_scale, Gradients& grads,
                            Workspace& ws) {
  const auto& k = kernels::active();
  const auto y = forward_features(params, features, ws);
  if (target.size() != y.size()) throw InvalidArgument("target size does not match network output");

  double sq = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    const double e = y[j] - target[j];
    sq += e * e;
    ws.delta[j] = 2.0 * e * grad_scale;
  }
  if (!std::isfinite(sq)) throw NumericalError("non-finite network output");

  for (std::size_t li = params.layers.size(); li-- > 0;) {
    const Layer& l = params.layers[li];
    const auto& z = ws.pre[li];
    switch (l.act) {
      case Activation::identity:
        break;
      case Activation::relu:
        for (std::size_t j = 0; j < l.out; ++j) {
          if (!(z[j] > 0.0)) ws.delta[j] = 0.0;
        }
        break;
      case Activation::sine:
        for (std::size_t j = 0; j < l.out; ++j) ws.delta[j] *= l.omega0 * std::cos(l.omega0 * z[j]);
        break;
    }
    const double* h = li == 0 ? features.data() : ws.post[li - 1].data();
    k.ger(grads.w[li].data(), l.out, l.in, 1.0, ws.delta.data(), h);
    k.axpy(1.0, ws.delta.data(), grads.b[li].data(), l.out);
    if (li > 0) {
      std::fill_n(ws.delta_prev.begin(), l.in, 0.0);
      k.gemv_t_acc(l.w.data(), l.out, l.in, ws.delta.data(), ws.delta_prev.data());
      std::swap(ws.delta, ws.delta_prev);
    }
  }
  return sq;
}

LossAndGradients backward(const NetworkParams& params, std::span<const double> coords,
                          std::span<const double> targets) {
  params.validate();
  const std::size_t d = params.in_dim();
  const std::size_t out_dim = params.out_dim();
  if (coords.empty() || coords.size() % d != 0) throw InvalidArgument("backward: empty or ragged batch");
  const std::size_t n = coords.size() / d;
  if (targets.size() != n * out_dim) throw InvalidArgument("backward: target shape mismatch");

  LossAndGradients out{0.0, Gradients::zeros_like(params)};
  Workspace ws(params);
  const double count = static_cast<double>(n * out_dim);
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    compute_features(params.input, ws.feature_scale, coords.subspan(i * d, d), ws.features);
    sq += accumulate_gradients(params, ws.features, targets.subspan(i * out_dim, out_dim),
                               1.0 / count, out.grads, ws);
  }
  out.loss = sq / count;
  return out;
}

namespace {

Layer make_layer(std::size_t in, std::size_t out, Activation act, double omega0, double w_bound,
                 double b_bound, Rng& rng) {
  Layer l;
  l.in = in;
  l.out = out;
  l.act = act;
  l.omega0 = act == Activation::sine ? omega0 : 1.0;
  l.w.resize(in * out);
  l.b.assign(out, 0.0);
  for (double& v : l.w) v = rng.uniform(-w_bound, w_bound);
  if (b_bound > 0.0) {
    for (double& v : l.b) v = rng.uniform(-b_bound, b_bound);
  }
  return l;
}

Layer make_hidden(std::size_t in, std::size_t out, Activation act, double omega0, Rng& rng) {
  const double fan_in = static_cast<double>(in);
  if (act == Activation::sine) {
    return make_layer(in, out, act, omega0, std::sqrt(6.0 / fan_in) / omega0,
                      1.0 / std::sqrt(fan_in), rng);
  }
  return make_layer(in, out, act, omega0, std::sqrt(6.0 / fan_in), 0.0, rng);
}

}  // namespace

NetworkParams init_network(const NetworkSpec& spec, std::uint64_t seed) {
  if (spec.depth < 0) throw InvalidArgument("network depth must be >= 0");
  if (spec.out_dim == 0) throw InvalidArgument("network needs at least one output");
  if (spec.depth > 0 && spec.width == 0) throw InvalidArgument("network width must be >= 1");
  if (spec.activation == Activation::identity && spec.depth > 0) {
    throw InvalidArgument("hidden layers need relu or sine activation");
  }
  if (spec.input.mode != InputMode::raw && spec.input.b.m() == 0) {
    throw InvalidArgument("mapped input needs a non-empty frequency matrix");
  }
  Rng rng(seed);
  NetworkParams params;
  params.input = spec.input;
  std::size_t width = spec.input.feature_dim();

  if (spec.input.mode == InputMode::raw && spec.activation == Activation::sine) {
    const std::size_t first = spec.first_width ? spec.first_width : spec.width;
    const double bound = 1.0 / static_cast<double>(width);
    params.layers.push_back(
        make_layer(width, first, Activation::sine, spec.omega0, bound, bound, rng));
    width = first;
  }
  for (int i = 0; i < spec.depth; ++i) {
    params.layers.push_back(make_hidden(width, spec.width, spec.activation, spec.omega0, rng));
    width = spec.width;
  }
  params.layers.push_back(make_layer(width, spec.out_dim, Activation::identity, 1.0,
                                     std::sqrt(3.0 / static_cast<double>(width)), 0.0, rng));
  params.validate();
  return params;
}

NetworkParams set_output_weights(NetworkParams params, std::span<const double> w,
                                 std::span<const double> b) {
  if (!params.is_mapped_perceptron()) {
    throw InvalidArgument("set_output_weights: network is not a mapped perceptron");
  }
  Layer& l = params.layers[0];
  if (w.size() != l.w.size() || b.size() != l.b.size()) {
    throw InvalidArgument("set_output_weights: shape mismatch");
  }
  std::copy(w.begin(), w.end(), l.w.begin());
  std::copy(b.begin(), b.end(), l.b.begin());
  return params;
}

}  // namespace finr
