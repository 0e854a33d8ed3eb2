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
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "finr/cli.hpp"
#include "finr/error.hpp"
#include "finr/imaging.hpp"
#include "finr/kernels.hpp"
#include "finr/pruning.hpp"
#include "finr/serialize.hpp"
#include "finr/spectral.hpp"

namespace finr::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kCodeVersion = "finr 0.1.0";

const std::vector<std::string> kDefaultMappings = {
    "sine:none",     "sine:integer", "sine:pruned",       "relu:pe",
    "relu:gaussian", "relu:gaussian_pr", "relu:integer", "relu:pruned"};

std::vector<ImageGrid> load_images(const ExperimentConfig& c) {
  if (c.images.empty()) throw InvalidArgument("no input image given (--image)");
  std::vector<ImageGrid> images;
  for (const auto& path : c.images) images.push_back(load_image(path));
  return images;
}

void write_json(const json& j, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_manifest(const std::string& command, const ExperimentConfig& c, json extra,
                    const fs::path& dir) {
  json m{{"command", command},
         {"code_version", kCodeVersion},
         {"isa", std::string(kernels::isa_name(kernels::active_isa()))},
         {"seed", c.seed},
         {"config", config_to_json(c)}};
  if (!extra.is_null()) m["results"] = std::move(extra);
  write_json(m, dir / "manifest.json");
}

double capped(double psnr) { return std::min(psnr, kPsnrCap); }

std::string format_db(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << capped(v);
  return s.str();
}

RealGrid channel_grid(const ImageGrid& img, std::size_t ch) {
  RealGrid g;
  g.rows = img.height;
  g.cols = img.width;
  g.values.resize(img.pixel_count());
  for (std::size_t r = 0; r < img.height; ++r) {
    for (std::size_t col = 0; col < img.width; ++col) g.values[r * img.width + col] = img.at(r, col, ch);
  }
  return g;
}

NetworkParams fft_initialized(const ImageGrid& grid, int N) {
  std::vector<SpectralCoefficients> channels;
  for (std::size_t ch = 0; ch < grid.channels; ++ch) {
    channels.push_back(coefficients_from_grid(channel_grid(grid, ch), N));
  }
  return network_from_coefficients(channels);
}

struct FitOutcome {
  TrainRun run;
  double train_psnr = 0.0;
  double test_psnr = 0.0;
};

FitOutcome fit_network(NetworkParams params, const ImageGrid& image, const TrainConfig& tc) {
  auto [train_set, test_set] = split_pixels(image);
  FitOutcome out;
  out.run = train(std::move(params), train_set, test_set, tc);
  out.train_psnr = out.run.history.back().train_psnr;
  out.test_psnr = out.run.history.back().test_psnr;
  return out;
}

void check_common(const ExperimentConfig& c) {
  if (c.N < 0) throw InvalidArgument("N must be >= 0");
  if (c.depth < 0) throw InvalidArgument("depth must be >= 0");
  if (c.width < 1) throw InvalidArgument("width must be >= 1");
  parse_activation(c.activation);
  if (c.mapping != "none") parse_family(c.mapping);
  train_config(c);
}

// Trains the B_M perceptron on one image and prunes it to B_N's row count.
FrequencyMatrix pruned_mapping(const ExperimentConfig& c, const ImageGrid& image, int N,
                               std::ostream& log) {
  NetworkSpec spec = network_spec(c, build_integer_lattice(2, c.M), Activation::relu, 0,
                                  image.channels, c.M);
  FitOutcome fit = fit_network(init_network(spec, c.seed), image, train_config(c));
  log << "trained B_" << c.M << " perceptron: train PSNR " << format_db(fit.train_psnr) << " dB\n";
  return prune(fit.run.params, PruneSpec{N, c.M});
}

}  // namespace

int cmd_fit(const ExperimentConfig& c, std::ostream& log) {
  check_common(c);
  if (c.weight_init != "none" && c.weight_init != "fft") {
    throw InvalidArgument("weight_init must be none or fft");
  }
  const TrainConfig tc = train_config(c);
  const Activation act = parse_activation(c.activation);
  const ImageGrid image = load_images(c).front();

  NetworkParams params;
  if (c.weight_init == "fft") {
    if (c.mapping != "integer" || c.depth != 0) {
      throw InvalidArgument("fft weight init needs an integer mapping and depth 0");
    }
    params = fft_initialized(train_grid(image), c.N);
  } else {
    params = init_network(
        network_spec(c, build_mapping(c, c.mapping, c.N), act, c.depth, image.channels, c.N),
        c.seed);
  }

  FitOutcome fit = fit_network(std::move(params), image, tc);

  const fs::path dir(c.out);
  fs::create_directories(dir);
  write_metrics_csv(fit.run.history, dir / "metrics.csv");
  save_network(fit.run.params, dir / "weights.json");
  save_image(render(fit.run.params, image.height, image.width), dir / "recon.png");
  if (c.render_period) {
    save_image(render(fit.run.params, image.height, image.width, 1.0, 1.0),
               dir / "recon_period.png");
  }
  write_manifest("fit", c,
                 json{{"train_psnr", capped(fit.train_psnr)},
                      {"test_psnr", capped(fit.test_psnr)},
                      {"weights_hash", weights_hash(fit.run.params)}},
                 dir);
  log << "final train PSNR: " << format_db(fit.train_psnr) << " dB\n";
  log << "final test PSNR: " << format_db(fit.test_psnr) << " dB\n";
  return kExitOk;
}

int cmd_init_check(const ExperimentConfig& c, std::ostream& log) {
  if (c.mapping != "integer") throw InvalidArgument("init-check needs the integer mapping");
  if (c.N < 0) throw InvalidArgument("N must be >= 0");
  if (c.train_grid != "full" && c.train_grid != "split") {
    throw InvalidArgument("train_grid must be full or split");
  }
  const ImageGrid image = load_images(c).front();
  const ImageGrid grid = c.train_grid == "split" ? train_grid(image) : image;
  if (!c.allow_even && (grid.height % 2 == 0 || grid.width % 2 == 0)) {
    throw InvalidArgument("train grid " + std::to_string(grid.height) + "x" +
                          std::to_string(grid.width) + " has an even side; pass --allow-even");
  }
  if (grid.height < 2 * static_cast<std::size_t>(c.N) ||
      grid.width < 2 * static_cast<std::size_t>(c.N)) {
    throw InvalidArgument("N exceeds the Nyquist limit of the train grid");
  }

  const NetworkParams params = fft_initialized(grid, c.N);
  const double value = psnr_from_mse(evaluate_mse(params, all_pixels(grid)));
  const bool pass = value >= c.threshold;

  const fs::path dir(c.out);
  fs::create_directories(dir);
  save_network(params, dir / "weights.json");
  write_manifest("init-check", c,
                 json{{"train_psnr", capped(value)}, {"pass", pass}}, dir);
  log << "iteration-0 train PSNR: " << std::fixed << std::setprecision(2) << value
      << std::defaultfloat << " dB (threshold "
      << format_db(c.threshold) << " dB): " << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kExitOk : kExitFailure;
}

int cmd_prune(const ExperimentConfig& c, std::ostream& log) {
  check_common(c);
  if (c.M < c.N) throw InvalidArgument("prune needs M >= N");
  const ImageGrid image = load_images(c).front();

  NetworkSpec spec = network_spec(c, build_integer_lattice(2, c.M), Activation::relu, 0,
                                  image.channels, c.M);
  FitOutcome fit = fit_network(init_network(spec, c.seed), image, train_config(c));
  const FrequencyMatrix pruned = prune(fit.run.params, PruneSpec{c.N, c.M});
  const double std_dev = mapping_std(pruned);

  const fs::path dir(c.out);
  fs::create_directories(dir);
  write_metrics_csv(fit.run.history, dir / "metrics.csv");
  save_network(fit.run.params, dir / "weights.json");
  save_frequency_matrix(pruned, dir / "pruned_mapping.json");
  write_manifest("prune", c,
                 json{{"rows", pruned.m()},
                      {"mapping_std", std_dev},
                      {"source_train_psnr", capped(fit.train_psnr)}},
                 dir);
  log << "B_" << c.M << " perceptron train PSNR: " << format_db(fit.train_psnr) << " dB\n";
  log << "pruned |D| = " << pruned.m() << " (lattice_size(2, " << c.N
      << ") = " << lattice_size(2, c.N) << ")\n";
  log << "mapping_std = " << std_dev << '\n';
  return kExitOk;
}

int cmd_compare(const ExperimentConfig& c, std::ostream& log) {
  check_common(c);
  const std::vector<int> Ns = c.Ns.empty() ? std::vector<int>{c.N} : c.Ns;
  const std::vector<int> depths = c.depths.empty() ? std::vector<int>{c.depth} : c.depths;
  const std::vector<std::uint64_t> seeds =
      c.seeds.empty() ? std::vector<std::uint64_t>{c.seed} : c.seeds;
  const std::vector<std::string> mappings = c.mappings.empty() ? kDefaultMappings : c.mappings;

  struct Cell {
    Activation act;
    std::string family;
    std::string label;
  };
  std::vector<Cell> cells;
  for (const auto& entry : mappings) {
    const auto colon = entry.find(':');
    Cell cell{Activation::relu, entry, entry};
    if (colon != std::string::npos) {
      cell.act = parse_activation(entry.substr(0, colon));
      cell.family = entry.substr(colon + 1);
    }
    if (cell.family != "none" && cell.family != "gaussian_pr") parse_family(cell.family);
    cells.push_back(cell);
  }
  for (int N : Ns) {
    if (N < 0) throw InvalidArgument("N must be >= 0");
  }
  for (int depth : depths) {
    if (depth < 0) throw InvalidArgument("depth must be >= 0");
  }
  const TrainConfig tc = train_config(c);
  const std::vector<ImageGrid> images = load_images(c);

  const fs::path dir(c.out);
  fs::create_directories(dir);
  std::ofstream csv(dir / "compare.csv");
  if (!csv) throw Error("cannot write compare.csv");
  csv << "activation,mapping,N,m,depth,seed,mean_train_psnr,mean_test_psnr,images,status\n";
  csv << std::setprecision(10);

  std::map<std::pair<std::size_t, int>, FrequencyMatrix> pruned_cache;
  auto pruned_for = [&](std::size_t image_index, int N) -> const FrequencyMatrix& {
    auto key = std::make_pair(image_index, N);
    auto it = pruned_cache.find(key);
    if (it == pruned_cache.end()) {
      it = pruned_cache.emplace(key, pruned_mapping(c, images[image_index], N, log)).first;
    }
    return it->second;
  };

  int completed = 0;
  for (int N : Ns) {
    for (const Cell& cell : cells) {
      for (int depth : depths) {
        for (std::uint64_t seed : seeds) {
          double sum_train = 0.0;
          double sum_test = 0.0;
          std::size_t m = 0;
          std::string status = "ok";
          try {
            for (std::size_t i = 0; i < images.size(); ++i) {
              ExperimentConfig cm = c;
              cm.seed = seed;
              std::optional<FrequencyMatrix> mapping;
              if (cell.family == "pruned") {
                mapping = pruned_for(i, N);
              } else if (cell.family == "gaussian_pr") {
                cm.sigma = mapping_std(pruned_for(i, N));
                mapping = build_mapping(cm, "gaussian", N);
              } else {
                mapping = build_mapping(cm, cell.family, N);
              }
              m = mapping ? mapping->m() : 0;
              NetworkParams params = init_network(
                  network_spec(c, std::move(mapping), cell.act, depth, images[i].channels, N),
                  c.seed);
              FitOutcome fit = fit_network(std::move(params), images[i], tc);
              sum_train += capped(fit.train_psnr);
              sum_test += capped(fit.test_psnr);
            }
          } catch (const std::exception& e) {
            status = e.what();
            std::replace(status.begin(), status.end(), ',', ';');
            std::replace(status.begin(), status.end(), '\n', ' ');
          }
          const bool ok = status == "ok";
          const double count = static_cast<double>(images.size());
          csv << activation_name(cell.act) << ',' << cell.family << ',' << N << ',' << m << ','
              << depth << ',' << seed << ',';
          if (ok) {
            csv << sum_train / count << ',' << sum_test / count;
            ++completed;
          } else {
            csv << ',';
          }
          csv << ',' << images.size() << ',' << status << '\n';
          log << cell.label << " N=" << N << " depth=" << depth << " seed=" << seed << ": ";
          if (ok) {
            log << "train " << format_db(sum_train / count) << " dB, test "
                << format_db(sum_test / count) << " dB\n";
          } else {
            log << "failed: " << status << '\n';
          }
        }
      }
    }
  }
  csv.close();
  write_manifest("compare", c, json{{"completed_cells", completed}}, dir);
  return completed > 0 ? kExitOk : kExitFailure;
}

int cmd_render(const ExperimentConfig& c, std::ostream& log) {
  if (c.weights.empty()) throw InvalidArgument("render needs --weights");
  if (c.render_height < 1 || c.render_width < 1) {
    throw InvalidArgument("render needs --render-height and --render-width >= 1");
  }
  const NetworkParams params = load_network(c.weights);
  const ImageGrid image = render(params, static_cast<std::size_t>(c.render_height),
                                 static_cast<std::size_t>(c.render_width), c.offset_x, c.offset_y);
  const fs::path dir(c.out);
  fs::create_directories(dir);
  save_image(image, dir / "render.png");
  write_manifest("render", c, json{{"weights_hash", weights_hash(params)}}, dir);
  log << "wrote " << (dir / "render.png").string() << '\n';
  return kExitOk;
}

namespace {

class IsaGuard {
 public:
  IsaGuard() : saved_(kernels::active_isa()) {}
  ~IsaGuard() { kernels::set_isa(saved_); }
  IsaGuard(const IsaGuard&) = delete;
  IsaGuard& operator=(const IsaGuard&) = delete;

 private:
  kernels::Isa saved_;
};

struct Overrides {
  json values = json::object();
  std::string config_path;
  std::string isa;
};

template <typename T>
void option(CLI::App* app, Overrides& o, const std::string& flag, const std::string& key,
            const std::string& help) {
  app->add_option_function<T>(flag, [&o, key](const T& v) { o.values[key] = v; }, help);
}

void flag(CLI::App* app, Overrides& o, const std::string& name, const std::string& key,
          const std::string& help) {
  app->add_flag_function(name, [&o, key](std::int64_t) { o.values[key] = true; }, help);
}

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config_path, "JSON config file");
  app->add_option("--isa", o.isa, "kernel set: scalar, avx2 or neon");
  option<std::vector<std::string>>(app, o, "--image", "images", "input image(s)");
  option<std::string>(app, o, "--mapping", "mapping", "integer|gaussian|pe|pruned|none");
  option<std::string>(app, o, "--mapping-file", "mapping_file", "pruned mapping JSON");
  option<int>(app, o, "--N", "N", "maximum integer frequency");
  option<int>(app, o, "--m", "m", "gaussian row count");
  option<double>(app, o, "--sigma", "sigma", "gaussian standard deviation");
  option<int>(app, o, "--depth", "depth", "hidden layers");
  option<int>(app, o, "--width", "width", "hidden layer width");
  option<std::string>(app, o, "--activation", "activation", "relu|sine");
  option<double>(app, o, "--omega0", "omega0", "sine layer frequency factor");
  option<int>(app, o, "--first-width", "first_width", "leading sine layer width");
  flag(app, o, "--progressive", "progressive", "progressive frequency training");
  option<double>(app, o, "--end-fraction", "end_fraction", "fraction of training where alpha ramps");
  option<std::int64_t>(app, o, "--iterations", "iterations", "optimizer steps");
  option<double>(app, o, "--lr", "lr", "learning rate");
  option<std::string>(app, o, "--optimizer", "optimizer", "adam|sgd");
  option<std::int64_t>(app, o, "--log-every", "log_every", "metrics interval");
  option<std::uint64_t>(app, o, "--seed", "seed", "random seed");
  flag(app, o, "--deterministic", "deterministic", "pin scalar kernels");
  option<std::string>(app, o, "--out", "out", "output directory");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fourier-mapped coordinate networks for images", "finr"};
  app.require_subcommand(1);
  Overrides o;

  CLI::App* fit = app.add_subcommand("fit", "train a network on an image");
  add_common(fit, o);
  option<std::string>(fit, o, "--weight-init", "weight_init", "none|fft");
  flag(fit, o, "--render-period", "render_period", "also render f(x + 1, y + 1)");

  CLI::App* init = app.add_subcommand("init-check", "check the FFT weight initialization");
  add_common(init, o);
  option<double>(init, o, "--threshold", "threshold", "minimum PSNR in dB");
  flag(init, o, "--allow-even", "allow_even", "accept even grid sides");
  option<std::string>(init, o, "--train-grid", "train_grid", "full|split");

  CLI::App* prune_cmd = app.add_subcommand("prune", "prune a trained lattice mapping");
  add_common(prune_cmd, o);
  option<int>(prune_cmd, o, "--M", "M", "source lattice frequency");

  CLI::App* compare = app.add_subcommand("compare", "run a mapping x depth x N grid");
  add_common(compare, o);
  option<int>(compare, o, "--M", "M", "source lattice frequency for pruned cells");
  option<std::vector<int>>(compare, o, "--Ns", "Ns", "frequencies");
  option<std::vector<int>>(compare, o, "--depths", "depths", "depths");
  option<std::vector<std::string>>(compare, o, "--mappings", "mappings",
                                   "activation:family entries");
  option<std::vector<std::uint64_t>>(compare, o, "--seeds", "seeds", "mapping seeds");

  CLI::App* render_cmd = app.add_subcommand("render", "render saved weights");
  add_common(render_cmd, o);
  option<std::string>(render_cmd, o, "--weights", "weights", "weights file");
  option<int>(render_cmd, o, "--render-height", "render_height", "output height");
  option<int>(render_cmd, o, "--render-width", "render_width", "output width");
  option<double>(render_cmd, o, "--offset-x", "offset_x", "x shift");
  option<double>(render_cmd, o, "--offset-y", "offset_y", "y shift");

  std::vector<std::string> storage = args;
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    json j = json::object();
    if (!o.config_path.empty()) {
      std::ifstream in(o.config_path);
      if (!in) throw InvalidArgument("cannot read config " + o.config_path);
      try {
        j = json::parse(in);
      } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed config: ") + e.what());
      }
      if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
    }
    for (const auto& [key, value] : o.values.items()) j[key] = value;
    if (j.contains("image") && j.contains("images")) j.erase("image");
    const ExperimentConfig config = config_from_json(j);
    const IsaGuard guard;
    if (!o.isa.empty()) kernels::set_isa(kernels::parse_isa(o.isa));
    if (config.deterministic) kernels::set_isa(kernels::Isa::scalar);

    if (fit->parsed()) return cmd_fit(config, out);
    if (init->parsed()) return cmd_init_check(config, out);
    if (prune_cmd->parsed()) return cmd_prune(config, out);
    if (compare->parsed()) return cmd_compare(config, out);
    return cmd_render(config, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << " (iteration " << e.iteration() << ")\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace finr::cli
