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


// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped at 1 for ctest).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "finr/embedding.hpp"
#include "finr/imaging.hpp"
#include "finr/kernels.hpp"
#include "finr/lattice.hpp"
#include "finr/network.hpp"
#include "finr/pruning.hpp"
#include "finr/serialize.hpp"
#include "finr/spectral.hpp"
#include "finr/training.hpp"
#include "gradient_check.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace finr;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int precision = 3) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

ImageGrid crop(const ImageGrid& img, std::size_t top, std::size_t left, std::size_t h,
               std::size_t w) {
  ImageGrid out(h, w, img.channels);
  for (std::size_t i = 0; i < h; ++i) {
    for (std::size_t j = 0; j < w; ++j) {
      for (std::size_t c = 0; c < img.channels; ++c) out.at(i, j, c) = img.at(top + i, left + j, c);
    }
  }
  return out;
}

NetworkParams fft_perceptron(const ImageGrid& grid, int N) {
  std::vector<SpectralCoefficients> channels;
  for (std::size_t c = 0; c < grid.channels; ++c) {
    RealGrid g{grid.height, grid.width, {}};
    for (std::size_t i = 0; i < grid.height; ++i) {
      for (std::size_t j = 0; j < grid.width; ++j) g.values.push_back(grid.at(i, j, c));
    }
    channels.push_back(coefficients_from_grid(g, N));
  }
  return network_from_coefficients(channels);
}

NetworkParams mapped_network(FrequencyMatrix b, int depth, Activation act, std::size_t out_dim,
                             std::uint64_t seed) {
  NetworkSpec spec;
  spec.input.mode = InputMode::mapped;
  spec.input.b = std::move(b);
  spec.depth = depth;
  spec.width = 32;
  spec.activation = act;
  spec.out_dim = out_dim;
  return init_network(spec, seed);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// 1. FFT-initialized integer perceptron reproduces its train grid.
Outcome fourier_series_identity() {
  const ImageGrid camera = load_image(test::data_path("camera512.png"));

  const auto start = std::chrono::steady_clock::now();
  const ImageGrid grid = crop(camera, 223, 223, 65, 65);
  const PixelSet pixels = all_pixels(grid);
  TrainConfig config;
  config.iterations = 1;
  config.learning_rate = 0.0;
  const TrainRun run = train(fft_perceptron(grid, 32), pixels, pixels, config);
  const double small = run.history.front().train_psnr;
  const double small_time = seconds_since(start);

  const auto slow_start = std::chrono::steady_clock::now();
  const ImageGrid big = train_grid(camera);
  const double large = psnr_from_mse(evaluate_mse(fft_perceptron(big, 128), all_pixels(big)));
  const double large_time = seconds_since(slow_start);

  Outcome o;
  o.pass = small >= 140.0 && small_time < 10.0 && large >= 140.0;
  o.detail = "65x65 N=32: " + fmt(small, 5) + " dB in " + fmt(small_time, 2) +
             " s; 256x256 N=128: " + fmt(large, 5) + " dB in " + fmt(large_time, 3) +
             " s (need >= 140 dB, < 10 s)";
  return o;
}

// 2. Closed-form lattice size against enumeration.
Outcome lattice_count() {
  int mismatches = 0;
  for (int d = 1; d <= 4; ++d) {
    for (int N = 0; N <= 8; ++N) {
      if (lattice_size(d, N) != test::enumerate_lattice(d, N).size()) ++mismatches;
      if (build_integer_lattice(d, N).m() != lattice_size(d, N)) ++mismatches;
    }
  }
  return {mismatches == 0, "36 (d, N) pairs checked, " +
                               std::to_string(mismatches) + " mismatches"};
}

// 3. Mapped perceptron equals its sine-layer form.
Outcome siren_equivalence() {
  double worst = 0.0;
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + trial % 3;
    FrequencyMatrix b;
    if (trial % 2 == 0) {
      b = build_integer_lattice(d, 1 + static_cast<int>(rng.next() % (d == 3 ? 2 : 4)));
    } else {
      b = build_gaussian_mapping(d, 1 + rng.next() % 40, 0.5 + 4.0 * rng.uniform(), rng.next());
    }
    const std::size_t out_dim = 1 + rng.next() % 3;
    NetworkSpec spec;
    spec.input.mode = InputMode::mapped;
    spec.input.d = static_cast<std::size_t>(d);
    spec.input.b = b;
    spec.out_dim = out_dim;
    NetworkParams p = init_network(spec, rng.next());
    for (double& w : p.layers[0].w) w = rng.uniform(-1.0, 1.0);
    for (double& v : p.layers[0].b) v = rng.uniform(-1.0, 1.0);
    const SirenForm form = to_siren_form(p.layers[0].w, p.layers[0].b, b);
    for (int k = 0; k < 100; ++k) {
      std::vector<double> x(d);
      for (double& v : x) v = rng.uniform();
      const auto a = forward(p, x);
      const auto s = evaluate_siren_form(form, x);
      for (std::size_t o = 0; o < out_dim; ++o) worst = std::max(worst, std::abs(a[o] - s[o]));
    }
  }
  return {worst < 1e-12, "max deviation " + fmt(worst) + " over 100 networks x 100 points (need < 1e-12)"};
}

// 4. Integer mappings are 1-periodic at every depth; gaussian mappings are not.
Outcome periodicity() {
  const ImageGrid img = load_image(test::data_path("camera64.png"));
  const auto [train_set, test_set] = split_pixels(img);
  TrainConfig config;
  config.iterations = 100;
  config.learning_rate = 1e-3;

  auto deviation = [](const NetworkParams& p) {
    Rng rng(99);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const std::vector<double> x = {rng.uniform(), rng.uniform()};
      const double y = forward(p, x)[0];
      for (int k = 0; k < 2; ++k) {
        std::vector<double> shifted = x;
        shifted[k] += 1.0;
        worst = std::max(worst, std::abs(forward(p, shifted)[0] - y));
      }
    }
    return worst;
  };

  double integer_worst = 0.0;
  int networks = 0;
  for (int depth = 0; depth <= 6; ++depth) {
    for (Activation act : {Activation::relu, Activation::sine}) {
      if (depth == 0 && act == Activation::sine) continue;
      const auto run = train(mapped_network(build_integer_lattice(2, 8), depth, act, 1, depth),
                             train_set, test_set, config);
      integer_worst = std::max(integer_worst, deviation(run.params));
      ++networks;
    }
  }
  TrainConfig gconfig = config;
  gconfig.iterations = 300;
  const auto grun = train(
      mapped_network(build_gaussian_mapping(2, 145, 10.0, 0), 0, Activation::relu, 1, 0),
      train_set, test_set, gconfig);
  const double gaussian = deviation(grun.params);
  return {integer_worst < 1e-9 && gaussian > 1e-3,
          "integer max |f(x+e_k)-f(x)| = " + fmt(integer_worst) + " over " +
              std::to_string(networks) + " trained networks (need < 1e-9); gaussian = " +
              fmt(gaussian) + " (need > 1e-3)"};
}

// 5. Backpropagation against central differences.
Outcome gradients() {
  double worst = 0.0;
  std::size_t checked = 0;
  int networks = 0;
  for (InputMode mode : {InputMode::raw, InputMode::mapped, InputMode::mapped_progressive}) {
    for (Activation act : {Activation::relu, Activation::sine}) {
      for (int depth : {0, 2}) {
        if (mode == InputMode::raw && act == Activation::relu && depth == 0) continue;
        NetworkSpec spec;
        spec.input.mode = mode;
        if (mode != InputMode::raw) spec.input.b = build_integer_lattice(2, 1);
        spec.depth = depth;
        spec.width = 8;
        spec.first_width = 8;
        spec.activation = act;
        spec.out_dim = 2;
        NetworkParams p = init_network(spec, 100 + networks);
        // nonzero biases keep relu pre-activations off the kink
        for (std::size_t l = 0; l < p.layers.size(); ++l) {
          p.layers[l].b = test::random_vector(p.layers[l].b.size(), 200 + 10 * networks + l, -0.5, 0.5);
        }
        if (mode == InputMode::mapped_progressive) {
          p.input.alpha = 0.6 * ProgressiveState::for_mapping(p.input.b).alpha_max;
        }
        const auto coords = test::random_vector(2 * 8, 300 + networks, 0.0, 1.0);
        const auto targets = test::random_vector(2 * 8, 400 + networks);
        const auto gc = test::check_gradients(p, coords, targets);
        worst = std::max(worst, gc.worst);
        checked += gc.checked;
        ++networks;
      }
    }
  }
  return {worst < 1e-5, "worst relative error " + fmt(worst) + " over " + std::to_string(checked) +
                            " parameters in " + std::to_string(networks) +
                            " networks (need < 1e-5)"};
}

// 6. 2-D FFT against the direct DFT.
Outcome fft_correctness() {
  double forward_err = 0.0;
  double round_trip = 0.0;
  for (std::size_t rows = 1; rows <= 8; ++rows) {
    for (std::size_t cols = 1; cols <= 8; ++cols) {
      RealGrid g{rows, cols, test::random_vector(rows * cols, rows * 31 + cols)};
      const Spectrum s = fft2_real(g);
      const auto ref = test::direct_dft2(g.values, rows, cols);
      for (std::size_t i = 0; i < ref.size(); ++i) {
        forward_err = std::max(forward_err, std::abs(s.bins[i] - ref[i]));
      }
      const auto back = ifft2(s);
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < back.size(); ++i) {
        num = std::max(num, std::abs(back[i] - g.values[i]));
        den = std::max(den, std::abs(g.values[i]));
      }
      round_trip = std::max(round_trip, num / den);
    }
  }
  return {forward_err < 1e-10 && round_trip < 1e-10,
          "max |fft - dft| = " + fmt(forward_err) + ", inverse round trip " + fmt(round_trip) +
              " relative, all grids up to 8x8 (need < 1e-10)"};
}

// 7. Progressive schedule and gate breakpoints.
Outcome progressive_schedule() {
  const ImageGrid img = test::random_image(8, 8, 1, 7);
  const auto [train_set, test_set] = split_pixels(img);
  const FrequencyMatrix b = build_integer_lattice(2, 4);
  TrainConfig config;
  config.iterations = 400;
  config.log_every = 1;
  config.progressive = true;
  const auto run = train(mapped_network(b, 0, Activation::relu, 1, 1), train_set, test_set, config);
  const double alpha_max = ProgressiveState::for_mapping(b).alpha_max;
  std::size_t mismatches = 0;
  for (const auto& h : run.history) {
    const double expect =
        alpha_max * std::min(1.0, static_cast<double>(h.iteration) / (0.75 * 400.0));
    if (h.alpha != expect) ++mismatches;
  }
  const bool reaches_max = run.history[300].alpha == alpha_max;
  const bool gates = progressive_weight(1.0, 1.5) == 0.0 && progressive_weight(-3.0, 0.0) == 0.0 &&
                     std::abs(progressive_weight(2.5, 2.0) - 0.5) < 1e-15 &&
                     progressive_weight(3.01, 2.0) == 1.0 && progressive_weight(9.0, 0.0) == 1.0;
  return {mismatches == 0 && reaches_max && gates,
          std::to_string(run.history.size()) + " alpha entries, " + std::to_string(mismatches) +
              " off the ramp, alpha_max reached at 75%: " + (reaches_max ? "yes" : "no") +
              ", gate breakpoints {0, 0.5, 1}: " + (gates ? "ok" : "wrong")};
}

// 8. Progressive training against plain training on a gaussian mapping.
Outcome progressive_generalization() {
  const ImageGrid img = load_image(test::data_path("camera64.png"));
  const auto [train_set, test_set] = split_pixels(img);
  std::vector<double> with_pt, without_pt;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    for (bool pt : {false, true}) {
      TrainConfig config;  // defaults: Adam, lr 1e-3, 2000 iterations
      config.progressive = pt;
      const auto net =
          mapped_network(build_gaussian_mapping(2, 481, 10.0, seed), 0, Activation::relu, 1, seed);
      const auto run = train(net, train_set, test_set, config);
      (pt ? with_pt : without_pt).push_back(run.history.back().test_psnr);
    }
  }
  const double a = median(with_pt);
  const double b = median(without_pt);
  return {a >= b, "median final test PSNR with PT " + fmt(a, 4) + " dB, without " + fmt(b, 4) +
                      " dB (5 seeds, 2000 Adam steps)"};
}

// 9. Integer lattice against positional encoding at N = 8, depth 0.
Outcome integer_vs_positional() {
  bool pass = true;
  std::string detail;
  for (const char* name : {"astronaut64.png", "coffee64.png", "chelsea64.png"}) {
    const ImageGrid img = load_image(test::data_path(name));
    const auto [train_set, test_set] = split_pixels(img);
    TrainConfig config;
    const auto integer = train(mapped_network(build_integer_lattice(2, 8), 0, Activation::relu,
                                              img.channels, 0),
                               train_set, test_set, config);
    const auto pe = train(mapped_network(build_positional_encoding(2, 8), 0, Activation::relu,
                                         img.channels, 0),
                          train_set, test_set, config);
    const double a = integer.history.back().train_psnr;
    const double b = pe.history.back().train_psnr;
    pass = pass && a > b;
    if (!detail.empty()) detail += "; ";
    detail += std::string(name) + " int " + fmt(a, 4) + " vs pe " + fmt(b, 4) + " dB";
  }
  return {pass, detail};
}

// 10. Pruning keeps lattice_size(d, N) rows and every active frequency.
Outcome pruning_contract() {
  const std::vector<test::Tone> tones = {{0, 1, 0.05, 0.0},  {1, -1, 0.0, 0.04}, {1, 0, 0.06, 0.02},
                                         {1, 2, 0.03, 0.0},  {2, -3, 0.0, 0.05}, {2, 1, 0.04, 0.04},
                                         {3, 0, 0.05, 0.0},  {3, 3, 0.0, 0.03},  {4, -2, 0.04, 0.0},
                                         {4, 4, 0.02, 0.03}};
  const ImageGrid img = test::tone_image(64, 64, 0.5, tones);
  const auto [train_set, test_set] = split_pixels(img);
  TrainConfig config;
  const auto run = train(mapped_network(build_integer_lattice(2, 8), 0, Activation::relu, 1, 0),
                         train_set, test_set, config);
  bool sizes = true;
  for (int n = 0; n <= 8; ++n) sizes = sizes && prune(run.params, {n, 8}).m() == lattice_size(2, n);
  const FrequencyMatrix d = prune(run.params, {4, 8});
  std::set<std::pair<int, int>> kept;
  for (std::size_t i = 0; i < d.m(); ++i) {
    kept.emplace(static_cast<int>(d.row(i)[0]), static_cast<int>(d.row(i)[1]));
  }
  int found = 0;
  for (const auto& t : tones) found += static_cast<int>(kept.count({t.kx, t.ky}));
  return {sizes && found == 10, "|D| == lattice_size(2, N) for N = 0..8: " +
                                    std::string(sizes ? "yes" : "no") + "; pr(4, 8) kept " +
                                    std::to_string(found) + "/10 active frequencies in " +
                                    std::to_string(d.m()) + " rows"};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // 0 means no limit
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "fourier-series identity", 0.0, fourier_series_identity},
      {2, "lattice count", 1.0, lattice_count},
      {3, "siren-form equivalence", 1.0, siren_equivalence},
      {4, "periodicity", 60.0, periodicity},
      {5, "gradient correctness", 10.0, gradients},
      {6, "fft correctness", 5.0, fft_correctness},
      {7, "progressive schedule", 1.0, progressive_schedule},
      {8, "progressive generalization", 0.0, progressive_generalization},
      {9, "integer vs positional ordering", 0.0, integer_vs_positional},
      {10, "pruning contract", 60.0, pruning_contract},
  };
  std::cout << "kernels: " << kernels::isa_name(kernels::active_isa()) << '\n';
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double elapsed = seconds_since(start);
    if (c.budget_s > 0.0 && elapsed >= c.budget_s) {
      o.pass = false;
      o.detail += "; over the " + fmt(c.budget_s) + " s budget";
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name
              << "): " << o.detail << " [" << fmt(elapsed, 3) << " s]" << std::endl;
    if (!o.pass) ++failed;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
