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

#include "finr/training.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <string>

#include "finr/embedding.hpp"
#include "finr/error.hpp"
#include "finr/kernels.hpp"

namespace finr {
namespace {

constexpr std::size_t kFeatureCacheDoubles = std::size_t{1} << 27;  // 1 GiB

class ScopedIsa {
 public:
  explicit ScopedIsa(std::optional<kernels::Isa> isa) : previous_(kernels::active_isa()) {
    if (isa) kernels::set_isa(*isa);
  }
  ~ScopedIsa() { kernels::set_isa(previous_); }
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  kernels::Isa previous_;
};

// First-layer inputs before progressive gating, cached when they fit in the
// budget and recomputed per sample otherwise.
class FeatureSource {
 public:
  FeatureSource(const InputMapping& input, const PixelSet& pixels)
      : input_(input), pixels_(pixels), dim_(input.feature_dim()) {
    input_.mode = input.mode == InputMode::raw ? InputMode::raw : InputMode::mapped;
    if (pixels.count() * dim_ <= kFeatureCacheDoubles) {
      cache_.resize(pixels.count() * dim_);
      for (std::size_t i = 0; i < pixels.count(); ++i) {
        compute(i, std::span<double>(cache_.data() + i * dim_, dim_));
      }
    }
  }

  // Gated features for sample i; `scratch` backs the result when needed.
  std::span<const double> get(std::size_t i, std::span<const double> scale,
                              std::span<double> scratch) const {
    std::span<const double> base;
    if (!cache_.empty()) {
      base = {cache_.data() + i * dim_, dim_};
    } else {
      compute(i, scratch);
      base = scratch;
    }
    if (scale.empty()) return base;
    kernels::active().mul(base.data(), scale.data(), scratch.data(), dim_);
    return scratch;
  }

 private:
  void compute(std::size_t i, std::span<double> out) const {
    compute_features(input_, {}, std::span<const double>(pixels_.coords).subspan(i * pixels_.d, pixels_.d),
                     out);
  }

  InputMapping input_;
  const PixelSet& pixels_;
  std::size_t dim_;
  std::vector<double> cache_;
};

double mse_over(const NetworkParams& params, const FeatureSource& source, const PixelSet& pixels,
                std::span<const double> scale, Workspace& ws) {
  const std::size_t c = pixels.channels;
  double sq = 0.0;
  for (std::size_t i = 0; i < pixels.count(); ++i) {
    const auto f = source.get(i, scale, ws.features);
    const auto y = forward_features(params, f, ws);
    sq += kernels::active().sum_sq_diff(y.data(), pixels.targets.data() + i * c, c);
  }
  return sq / static_cast<double>(pixels.count() * c);
}

PixelSet collect(const ImageGrid& image, std::size_t stride) {
  PixelSet set;
  set.d = 2;
  set.channels = image.channels;
  set.grid_rows = (image.height + stride - 1) / stride;
  set.grid_cols = (image.width + stride - 1) / stride;
  const auto coords = pixel_coordinates(image.height, image.width);
  for (std::size_t i = 0; i < image.height; i += stride) {
    for (std::size_t j = 0; j < image.width; j += stride) {
      const std::size_t p = i * image.width + j;
      set.coords.push_back(coords[2 * p]);
      set.coords.push_back(coords[2 * p + 1]);
      for (std::size_t ch = 0; ch < image.channels; ++ch) set.targets.push_back(image.at(i, j, ch));
    }
  }
  return set;
}

}  // namespace

PixelSet all_pixels(const ImageGrid& image) { return collect(image, 1); }

std::pair<PixelSet, PixelSet> split_pixels(const ImageGrid& image) {
  if (image.height < 2 || image.width < 2) {
    throw InvalidArgument("split_pixels: image must be at least 2x2");
  }
  return {collect(image, 2), collect(image, 1)};
}

ImageGrid train_grid(const ImageGrid& image) {
  ImageGrid out((image.height + 1) / 2, (image.width + 1) / 2, image.channels);
  for (std::size_t i = 0; i < out.height; ++i) {
    for (std::size_t j = 0; j < out.width; ++j) {
      for (std::size_t c = 0; c < image.channels; ++c) out.at(i, j, c) = image.at(2 * i, 2 * j, c);
    }
  }
  return out;
}

double psnr_from_mse(double mse) {
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return -10.0 * std::log10(mse);
}

double psnr(std::span<const double> pred, std::span<const double> target) {
  if (pred.size() != target.size() || pred.empty()) {
    throw InvalidArgument("psnr: images must be non-empty and the same shape");
  }
  const double sq = kernels::active().sum_sq_diff(pred.data(), target.data(), pred.size());
  return psnr_from_mse(sq / static_cast<double>(pred.size()));
}

double psnr(const ImageGrid& pred, const ImageGrid& target) {
  if (pred.height != target.height || pred.width != target.width ||
      pred.channels != target.channels) {
    throw InvalidArgument("psnr: image shapes differ");
  }
  return psnr(std::span<const double>(pred.data), std::span<const double>(target.data));
}

void TrainConfig::validate() const {
  if (iterations < 1) throw InvalidArgument("iterations must be >= 1");
  if (!(end_fraction > 0.0 && end_fraction <= 1.0)) {
    throw InvalidArgument("end_fraction must be in (0, 1]");
  }
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw InvalidArgument("learning rate must be finite and >= 0");
  }
  if (log_every < 1) throw InvalidArgument("log_every must be >= 1");
}

double evaluate_mse(const NetworkParams& params, const PixelSet& pixels) {
  params.validate();
  Workspace ws(params);
  const std::size_t c = pixels.channels;
  double sq = 0.0;
  for (std::size_t i = 0; i < pixels.count(); ++i) {
    compute_features(params.input, ws.feature_scale,
                     std::span<const double>(pixels.coords).subspan(i * pixels.d, pixels.d),
                     ws.features);
    const auto y = forward_features(params, ws.features, ws);
    sq += kernels::active().sum_sq_diff(y.data(), pixels.targets.data() + i * c, c);
  }
  return sq / static_cast<double>(pixels.count() * c);
}

TrainRun train(NetworkParams params, const PixelSet& train_set, const PixelSet& test_set,
               const TrainConfig& config) {
  config.validate();
  params.validate();
  if (train_set.count() == 0) throw InvalidArgument("train: empty train set");
  if (train_set.channels != params.out_dim() || test_set.channels != params.out_dim()) {
    throw InvalidArgument("train: pixel channels do not match network outputs");
  }
  if (train_set.d != params.in_dim()) throw InvalidArgument("train: coordinate dimension mismatch");

  ScopedIsa isa(config.deterministic ? std::optional(kernels::Isa::scalar) : std::nullopt);
  const auto& k = kernels::active();

  std::optional<ProgressiveState> schedule;
  if (config.progressive) {
    if (params.input.mode == InputMode::raw) {
      throw InvalidArgument("progressive training needs a Fourier-mapped input");
    }
    params.input.mode = InputMode::mapped_progressive;
    schedule = ProgressiveState::for_mapping(params.input.b, config.end_fraction);
  }

  const FeatureSource train_features(params.input, train_set);
  const FeatureSource test_features(params.input, test_set);
  Workspace ws(params);
  Gradients grads = Gradients::zeros_like(params);
  Gradients adam_m = Gradients::zeros_like(params);
  Gradients adam_v = Gradients::zeros_like(params);

  const std::size_t n = train_set.count();
  const std::size_t c = train_set.channels;
  const double count = static_cast<double>(n * c);
  const double beta1 = config.optimizer.beta1;
  const double beta2 = config.optimizer.beta2;
  double beta1_pow = 1.0;
  double beta2_pow = 1.0;

  TrainRun run;
  std::vector<double> scale;
  auto set_alpha = [&](std::int64_t t) {
    if (!schedule) return;
    *schedule = alpha_schedule(t, config.iterations, *schedule);
    params.input.alpha = schedule->alpha;
    scale = feature_scale(params.input);
  };

  for (std::int64_t t = 0; t < config.iterations; ++t) {
    set_alpha(t);
    grads.clear();
    double sq = 0.0;
    try {
      for (std::size_t i = 0; i < n; ++i) {
        const auto f = train_features.get(i, scale, ws.features);
        sq += accumulate_gradients(params, f, std::span<const double>(train_set.targets).subspan(i * c, c),
                                   1.0 / count, grads, ws);
      }
    } catch (const NumericalError&) {
      throw NumericalError("training diverged at iteration " + std::to_string(t), t);
    }
    const double loss = sq / count;
    if (!std::isfinite(loss)) {
      throw NumericalError("training diverged at iteration " + std::to_string(t), t);
    }

    if (t % config.log_every == 0) {
      const double test_mse =
          test_set.count() ? mse_over(params, test_features, test_set, scale, ws) : 0.0;
      run.history.push_back({t, psnr_from_mse(loss), psnr_from_mse(test_mse),
                             params.input.alpha});
    }

    if (config.optimizer.kind == OptimizerKind::adam) {
      beta1_pow *= beta1;
      beta2_pow *= beta2;
      for (std::size_t li = 0; li < params.layers.size(); ++li) {
        Layer& l = params.layers[li];
        k.adam(l.w.data(), grads.w[li].data(), adam_m.w[li].data(), adam_v.w[li].data(),
               l.w.size(), config.learning_rate, beta1, beta2, config.optimizer.eps,
               1.0 - beta1_pow, 1.0 - beta2_pow);
        k.adam(l.b.data(), grads.b[li].data(), adam_m.b[li].data(), adam_v.b[li].data(),
               l.b.size(), config.learning_rate, beta1, beta2, config.optimizer.eps,
               1.0 - beta1_pow, 1.0 - beta2_pow);
      }
    } else {
      for (std::size_t li = 0; li < params.layers.size(); ++li) {
        Layer& l = params.layers[li];
        k.axpy(-config.learning_rate, grads.w[li].data(), l.w.data(), l.w.size());
        k.axpy(-config.learning_rate, grads.b[li].data(), l.b.data(), l.b.size());
      }
    }
  }

  set_alpha(config.iterations);
  const double train_mse = mse_over(params, train_features, train_set, scale, ws);
  const double test_mse =
      test_set.count() ? mse_over(params, test_features, test_set, scale, ws) : 0.0;
  if (!std::isfinite(train_mse)) {
    throw NumericalError("training diverged at iteration " + std::to_string(config.iterations),
                         config.iterations);
  }
  run.history.push_back({config.iterations, psnr_from_mse(train_mse), psnr_from_mse(test_mse),
                         params.input.alpha});
  run.params = std::move(params);
  return run;
}

void write_metrics_csv(const std::vector<HistoryEntry>& history, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << "iteration,train_psnr,test_psnr,alpha\n";
  out.precision(17);
  auto cap = [](double v) { return std::min(v, kPsnrCap); };
  for (const auto& h : history) {
    out << h.iteration << ',' << cap(h.train_psnr) << ',' << cap(h.test_psnr) << ',' << h.alpha
        << '\n';
  }
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace finr
