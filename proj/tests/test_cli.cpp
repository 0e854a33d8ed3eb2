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
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "finr/cli.hpp"
#include "finr/embedding.hpp"
#include "finr/serialize.hpp"
#include "json.hpp"
#include "test_util.hpp"

using namespace finr;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "finr");
  std::ostringstream out, err;
  CliResult r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

const std::vector<test::Tone> kTones = {{0, 1, 0.05, 0.0},  {1, -1, 0.0, 0.04}, {2, 0, 0.04, 0.02},
                                        {3, 5, 0.03, 0.0},  {5, -7, 0.0, 0.05}, {7, 2, 0.03, 0.03},
                                        {8, -8, 0.02, 0.0}, {10, 3, 0.0, 0.03}, {4, 10, 0.03, 0.0},
                                        {6, 6, 0.02, 0.02}};

}  // namespace

TEST_CASE("fit writes every artifact and fits a band-limited image") {
  test::TempDir dir("fit");
  save_image(test::tone_image(68, 68, 0.5, kTones), dir / "bl.png");
  const auto r = run_cli({"fit", "--image", (dir / "bl.png").string(), "--N", "16", "--iterations",
                          "2000", "--out", (dir / "run").string()});
  REQUIRE(r.code == 0);
  for (const char* f : {"metrics.csv", "weights.json", "recon.png", "manifest.json"}) {
    CHECK(fs::exists(dir / "run" / f));
  }
  CHECK(r.out.find("final train PSNR") != std::string::npos);
  CHECK(r.out.find("final test PSNR") != std::string::npos);
  const auto manifest = read_json(dir / "run" / "manifest.json");
  CHECK(manifest["command"] == "fit");
  CHECK(manifest["config"]["N"] == 16);
  CHECK(manifest.contains("code_version"));
  CHECK(manifest["results"]["train_psnr"].get<double>() > 60.0);
  const auto csv = read_csv(dir / "run" / "metrics.csv");
  CHECK(csv.front() == std::vector<std::string>{"iteration", "train_psnr", "test_psnr", "alpha"});
  CHECK(csv.back()[0] == "2000");
  const auto recon = load_image(dir / "run" / "recon.png");
  CHECK(recon.height == 68);
}

TEST_CASE("fit with --progressive logs the alpha ramp") {
  test::TempDir dir("prog");
  save_image(test::random_image(16, 16, 3, 1), dir / "img.png");
  const auto r = run_cli({"fit", "--image", (dir / "img.png").string(), "--N", "4", "--iterations",
                          "100", "--log-every", "5", "--progressive", "--out", (dir / "run").string()});
  REQUIRE(r.code == 0);
  const auto csv = read_csv(dir / "run" / "metrics.csv");
  const double alpha_max = ProgressiveState::for_mapping(build_integer_lattice(2, 4)).alpha_max;
  REQUIRE(csv.size() == 22);
  for (std::size_t i = 1; i < csv.size(); ++i) {
    const double it = std::stod(csv[i][0]);
    CHECK(std::stod(csv[i][3]) == alpha_max * std::min(1.0, it / 75.0));
  }
}

TEST_CASE("invalid configuration exits 2 without writing") {
  test::TempDir dir("bad");
  save_image(test::random_image(8, 8, 1, 1), dir / "img.png");
  const auto out = dir / "run";
  CHECK(run_cli({"fit", "--image", (dir / "img.png").string(), "--N", "-1", "--out", out.string()})
            .code == 2);
  CHECK_FALSE(fs::exists(out));
  CHECK(run_cli({"fit", "--image", (dir / "img.png").string(), "--activation", "tanh", "--out",
                 out.string()})
            .code == 2);
  CHECK(run_cli({"fit", "--image", (dir / "img.png").string(), "--iterations", "0", "--out",
                 out.string()})
            .code == 2);
  CHECK(run_cli({"fit", "--out", out.string()}).code == 2);
  CHECK(run_cli({"fit", "--bogus-flag"}).code == 2);
  CHECK(run_cli({"explode"}).code == 2);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("missing images are runtime failures") {
  test::TempDir dir("missing");
  const auto r = run_cli({"fit", "--image", (dir / "nope.png").string(), "--out", (dir / "o").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("nope.png") != std::string::npos);
}

TEST_CASE("config files: values, overrides and unknown keys") {
  test::TempDir dir("cfg");
  save_image(test::random_image(8, 8, 1, 2), dir / "img.png");
  {
    std::ofstream out(dir / "good.json");
    out << json{{"image", (dir / "img.png").string()}, {"N", 2}, {"iterations", 30},
                {"out", (dir / "from_file").string()}}
               .dump();
  }
  auto r = run_cli({"fit", "--config", (dir / "good.json").string(), "--iterations", "40"});
  REQUIRE(r.code == 0);
  const auto manifest = read_json(dir / "from_file" / "manifest.json");
  CHECK(manifest["config"]["N"] == 2);
  CHECK(manifest["config"]["iterations"] == 40);

  {
    std::ofstream out(dir / "typo.json");
    out << R"({"N": 2, "iteratons": 30})";
  }
  r = run_cli({"fit", "--config", (dir / "typo.json").string(), "--image",
               (dir / "img.png").string(), "--out", (dir / "typo").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("iteratons") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "typo"));

  {
    std::ofstream out(dir / "broken.json");
    out << "{ not json";
  }
  CHECK(run_cli({"fit", "--config", (dir / "broken.json").string()}).code == 2);
}

TEST_CASE("config JSON round-trips") {
  cli::ExperimentConfig c;
  c.images = {"a.png", "b.png"};
  c.N = 12;
  c.seeds = {1, 2, 3};
  c.mappings = {"relu:integer"};
  const auto back = cli::config_from_json(cli::config_to_json(c));
  CHECK(cli::config_to_json(back) == cli::config_to_json(c));
}

TEST_CASE("deterministic fits are byte-identical") {
  test::TempDir dir("det");
  save_image(test::random_image(12, 12, 3, 3), dir / "img.png");
  for (const char* name : {"a", "b"}) {
    REQUIRE(run_cli({"fit", "--image", (dir / "img.png").string(), "--mapping", "gaussian", "--m",
                     "20", "--sigma", "4", "--depth", "2", "--width", "8", "--iterations", "60",
                     "--seed", "5", "--deterministic", "--out", (dir / name).string()})
                .code == 0);
  }
  for (const char* f : {"metrics.csv", "weights.json", "recon.png"}) {
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  auto ma = read_json(dir / "a" / "manifest.json");
  auto mb = read_json(dir / "b" / "manifest.json");
  CHECK(ma["isa"] == "scalar");
  ma["config"].erase("out");
  mb["config"].erase("out");
  CHECK(ma == mb);
}

TEST_CASE("fft weight init starts at the optimum") {
  test::TempDir dir("fftinit");
  save_image(test::random_image(34, 34, 1, 4), dir / "img.png");
  REQUIRE(run_cli({"fit", "--image", (dir / "img.png").string(), "--N", "8", "--weight-init", "fft",
                   "--iterations", "1", "--lr", "0", "--out", (dir / "run").string()})
              .code == 0);
  const auto csv = read_csv(dir / "run" / "metrics.csv");
  CHECK(std::stod(csv[1][1]) >= 140.0);
  CHECK(run_cli({"fit", "--image", (dir / "img.png").string(), "--N", "8", "--weight-init", "fft",
                 "--mapping", "pe", "--out", (dir / "bad").string()})
            .code == 2);
}

TEST_CASE("init-check passes on an odd synthetic grid and honours the threshold") {
  test::TempDir dir("init");
  save_image(test::random_image(65, 65, 1, 5), dir / "img.png");
  const std::string img = (dir / "img.png").string();
  auto r = run_cli({"init-check", "--image", img, "--N", "32", "--out", (dir / "a").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS") != std::string::npos);
  CHECK(read_json(dir / "a" / "manifest.json")["results"]["train_psnr"].get<double>() >= 140.0);

  r = run_cli({"init-check", "--image", img, "--N", "32", "--threshold", "300", "--out",
               (dir / "b").string()});
  CHECK(r.code == 1);
  CHECK(r.out.find("FAIL") != std::string::npos);

  CHECK(run_cli({"init-check", "--image", img, "--N", "32", "--mapping", "gaussian"}).code == 2);
  CHECK(run_cli({"init-check", "--image", img, "--N", "40"}).code == 2);
}

TEST_CASE("init-check requires --allow-even for even grids") {
  test::TempDir dir("even");
  save_image(test::random_image(16, 16, 1, 6), dir / "img.png");
  const std::string img = (dir / "img.png").string();
  CHECK(run_cli({"init-check", "--image", img, "--N", "8", "--out", (dir / "a").string()}).code == 2);
  CHECK(run_cli({"init-check", "--image", img, "--N", "8", "--allow-even", "--out",
                 (dir / "b").string()})
            .code == 0);
  CHECK(run_cli({"init-check", "--image", img, "--N", "4", "--train-grid", "split", "--allow-even",
                 "--out", (dir / "c").string()})
            .code == 0);
}

TEST_CASE("prune keeps the true frequencies of a band-limited image") {
  test::TempDir dir("prune");
  const std::vector<test::Tone> tones = {{0, 1, 0.05, 0.0}, {1, -1, 0.0, 0.04}, {2, 3, 0.04, 0.02},
                                         {5, -8, 0.03, 0.0}, {8, 8, 0.0, 0.05}, {7, 0, 0.04, 0.0}};
  save_image(test::tone_image(68, 68, 0.5, tones), dir / "bl.png");
  const auto r = run_cli({"prune", "--image", (dir / "bl.png").string(), "--N", "8", "--M", "16",
                          "--out", (dir / "run").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("pruned |D| = 145 (lattice_size(2, 8) = 145)") != std::string::npos);
  CHECK(r.out.find("mapping_std") != std::string::npos);
  const auto d = load_frequency_matrix(dir / "run" / "pruned_mapping.json");
  CHECK(d.family() == MappingFamily::pruned);
  CHECK(d.m() == 145);
  std::set<std::pair<int, int>> kept;
  for (std::size_t i = 0; i < d.m(); ++i) {
    kept.emplace(static_cast<int>(d.row(i)[0]), static_cast<int>(d.row(i)[1]));
  }
  CHECK(kept.count({0, 0}) == 1);
  for (const auto& t : tones) {
    CAPTURE(t.kx);
    CAPTURE(t.ky);
    CHECK(kept.count({t.kx, t.ky}) == 1);
  }
  const auto manifest = read_json(dir / "run" / "manifest.json");
  CHECK(manifest["results"]["mapping_std"].get<double>() > 0.0);

  // pruned mapping feeds back into fit
  CHECK(run_cli({"fit", "--image", (dir / "bl.png").string(), "--mapping", "pruned",
                 "--mapping-file", (dir / "run" / "pruned_mapping.json").string(), "--iterations",
                 "20", "--out", (dir / "refit").string()})
            .code == 0);
}

TEST_CASE("prune sanity run with M = N + 1") {
  test::TempDir dir("prune1");
  save_image(test::random_image(16, 16, 3, 7), dir / "img.png");
  const auto r = run_cli({"prune", "--image", (dir / "img.png").string(), "--N", "3", "--M", "4",
                          "--iterations", "50", "--out", (dir / "run").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("pruned |D| = 25 (lattice_size(2, 3) = 25)") != std::string::npos);
  CHECK(run_cli({"prune", "--image", (dir / "img.png").string(), "--N", "5", "--M", "4"}).code == 2);
}

TEST_CASE("compare emits one row per mapping and depth") {
  test::TempDir dir("cmp");
  save_image(load_image(test::data_path("astronaut64.png")), dir / "a.png");
  save_image(load_image(test::data_path("coffee64.png")), dir / "b.png");
  const auto r = run_cli({"compare", "--image", (dir / "a.png").string(), (dir / "b.png").string(),
                          "--N", "8", "--depths", "0", "2", "--M", "12", "--iterations", "30",
                          "--out", (dir / "run").string()});
  REQUIRE(r.code == 0);
  const auto csv = read_csv(dir / "run" / "compare.csv");
  REQUIRE(csv.size() == 1 + 2 * 8);
  CHECK(csv[0] == std::vector<std::string>{"activation", "mapping", "N", "m", "depth", "seed",
                                           "mean_train_psnr", "mean_test_psnr", "images",
                                           "status"});
  std::set<std::string> mappings;
  for (std::size_t i = 1; i < csv.size(); ++i) {
    CHECK(csv[i][9] == "ok");
    CHECK(csv[i][8] == "2");
    mappings.insert(csv[i][0] + ":" + csv[i][1]);
  }
  CHECK(mappings.size() == 8);
}

TEST_CASE("compare records failing cells and keeps going") {
  test::TempDir dir("cmpfail");
  save_image(test::random_image(16, 16, 1, 8), dir / "a.png");
  // raw relu input at depth 0 is rejected, so only the integer cell completes
  const auto r = run_cli({"compare", "--image", (dir / "a.png").string(), "--N", "2", "--mappings",
                          "relu:integer", "relu:none", "--iterations", "10", "--out",
                          (dir / "run").string()});
  CHECK(r.code == 0);
  const auto csv = read_csv(dir / "run" / "compare.csv");
  REQUIRE(csv.size() == 3);
  CHECK(csv[1][9] == "ok");
  CHECK(csv[2][9] != "ok");
}

TEST_CASE("compare: integer beats positional encoding on a natural image") {
  test::TempDir dir("order");
  save_image(load_image(test::data_path("astronaut64.png")), dir / "a.png");
  const auto r = run_cli({"compare", "--image", (dir / "a.png").string(), "--N", "8", "--mappings",
                          "relu:integer", "relu:pe", "--out", (dir / "run").string()});
  REQUIRE(r.code == 0);
  const auto csv = read_csv(dir / "run" / "compare.csv");
  REQUIRE(csv.size() == 3);
  CHECK(std::stod(csv[1][6]) > std::stod(csv[2][6]));
}

TEST_CASE("compare: gaussian cells vary with the seed, integer cells do not") {
  test::TempDir dir("seeds");
  save_image(load_image(test::data_path("chelsea64.png")), dir / "a.png");
  const auto r = run_cli({"compare", "--image", (dir / "a.png").string(), "--N", "4", "--mappings",
                          "relu:gaussian", "relu:integer", "--seeds", "1", "2", "--iterations",
                          "50", "--out", (dir / "run").string()});
  REQUIRE(r.code == 0);
  const auto csv = read_csv(dir / "run" / "compare.csv");
  REQUIRE(csv.size() == 5);
  CHECK(csv[1][1] == "gaussian");
  CHECK(csv[1][6] != csv[2][6]);
  CHECK(csv[3][1] == "integer");
  CHECK(csv[3][6] == csv[4][6]);
}

TEST_CASE("render draws saved weights with offsets") {
  test::TempDir dir("render");
  save_image(test::random_image(16, 16, 3, 9), dir / "img.png");
  REQUIRE(run_cli({"fit", "--image", (dir / "img.png").string(), "--N", "4", "--iterations", "50",
                   "--render-period", "--out", (dir / "fit").string()})
              .code == 0);
  CHECK(slurp(dir / "fit" / "recon.png") == slurp(dir / "fit" / "recon_period.png"));
  const std::string weights = (dir / "fit" / "weights.json").string();
  REQUIRE(run_cli({"render", "--weights", weights, "--render-height", "16", "--render-width", "16",
                   "--out", (dir / "r0").string()})
              .code == 0);
  REQUIRE(run_cli({"render", "--weights", weights, "--render-height", "16", "--render-width", "16",
                   "--offset-x", "1", "--offset-y", "1", "--out", (dir / "r1").string()})
              .code == 0);
  CHECK(slurp(dir / "r0" / "render.png") == slurp(dir / "fit" / "recon.png"));
  CHECK(slurp(dir / "r1" / "render.png") == slurp(dir / "r0" / "render.png"));
  CHECK(run_cli({"render", "--weights", weights}).code == 2);
}

TEST_CASE("the installed binary maps errors to exit codes") {
  const std::string bin = FINR_CLI_PATH;
  CHECK(std::system((bin + " --help > /dev/null").c_str()) == 0);
  CHECK(WEXITSTATUS(std::system((bin + " fit --N -1 > /dev/null 2>&1").c_str())) == 2);
  CHECK(WEXITSTATUS(std::system((bin + " nonsense > /dev/null 2>&1").c_str())) == 2);
}
