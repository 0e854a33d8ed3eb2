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

#include "finr/serialize.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "finr/error.hpp"

namespace finr {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'F', 'I', 'N', 'R', 'W', 'B', '0', '1'};

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json parse_json(const std::vector<unsigned char>& bytes, const std::filesystem::path& path) {
  try {
    return json::parse(bytes.begin(), bytes.end());
  } catch (const json::exception& e) {
    throw InvalidArgument("malformed JSON in " + path.string() + ": " + e.what());
  }
}

class Writer {
 public:
  template <typename T>
  void put(T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    unsigned char raw[sizeof(T)];
    std::memcpy(raw, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
    bytes.insert(bytes.end(), raw, raw + sizeof(T));
  }
  void put_doubles(const std::vector<double>& v) {
    for (double x : v) put(x);
  }
  std::vector<unsigned char> bytes;
};

class Reader {
 public:
  explicit Reader(const std::vector<unsigned char>& b) : bytes_(b) {}
  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > bytes_.size()) throw InvalidArgument("truncated binary weight file");
    unsigned char raw[sizeof(T)];
    std::memcpy(raw, bytes_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
    pos_ += sizeof(T);
    T v;
    std::memcpy(&v, raw, sizeof(T));
    return v;
  }
  std::vector<double> get_doubles(std::uint64_t n) {
    if (n > (bytes_.size() - pos_) / sizeof(double)) {
      throw InvalidArgument("truncated binary weight file");
    }
    std::vector<double> v(n);
    for (auto& x : v) x = get<double>();
    return v;
  }
  std::string get_string(std::uint32_t n) {
    if (pos_ + n > bytes_.size()) throw InvalidArgument("truncated binary weight file");
    std::string s(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_),
                  bytes_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += n;
    return s;
  }
  std::size_t pos() const { return pos_; }
  void skip(std::size_t n) { pos_ += n; }

 private:
  const std::vector<unsigned char>& bytes_;
  std::size_t pos_ = 0;
};

void write_mapping(Writer& w, const FrequencyMatrix& b) {
  w.put<std::uint32_t>(static_cast<std::uint32_t>(b.family()));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(b.d()));
  w.put<std::uint64_t>(b.m());
  w.put<std::uint8_t>(b.N.has_value());
  w.put<std::int32_t>(b.N.value_or(0));
  w.put<std::uint8_t>(b.sigma.has_value());
  w.put<double>(b.sigma.value_or(0.0));
  w.put<std::uint8_t>(b.seed.has_value());
  w.put<std::uint64_t>(b.seed.value_or(0));
  w.put<std::uint8_t>(b.provenance.has_value());
  const PruneProvenance prov = b.provenance.value_or(PruneProvenance{});
  w.put<std::int32_t>(prov.source_M);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(prov.source_weights_hash.size()));
  w.bytes.insert(w.bytes.end(), prov.source_weights_hash.begin(), prov.source_weights_hash.end());
  w.put_doubles(b.data());
}

FrequencyMatrix read_mapping(Reader& r) {
  const auto family = r.get<std::uint32_t>();
  if (family > static_cast<std::uint32_t>(MappingFamily::pruned)) {
    throw InvalidArgument("unknown mapping family in binary weight file");
  }
  const auto d = r.get<std::uint32_t>();
  const auto m = r.get<std::uint64_t>();
  const bool has_n = r.get<std::uint8_t>();
  const auto n = r.get<std::int32_t>();
  const bool has_sigma = r.get<std::uint8_t>();
  const auto sigma = r.get<double>();
  const bool has_seed = r.get<std::uint8_t>();
  const auto seed = r.get<std::uint64_t>();
  const bool has_prov = r.get<std::uint8_t>();
  PruneProvenance prov;
  prov.source_M = r.get<std::int32_t>();
  prov.source_weights_hash = r.get_string(r.get<std::uint32_t>());
  if (d == 0) throw InvalidArgument("mapping with d = 0 in binary weight file");
  FrequencyMatrix b(static_cast<MappingFamily>(family), d, r.get_doubles(m * d));
  if (has_n) b.N = n;
  if (has_sigma) b.sigma = sigma;
  if (has_seed) b.seed = seed;
  if (has_prov) b.provenance = prov;
  return b;
}

}  // namespace

json frequency_matrix_to_json(const FrequencyMatrix& b) {
  json j;
  j["family"] = family_name(b.family());
  j["d"] = b.d();
  if (b.N) j["N"] = *b.N;
  if (b.sigma) j["sigma"] = *b.sigma;
  if (b.seed) j["seed"] = *b.seed;
  if (b.provenance) {
    j["source_M"] = b.provenance->source_M;
    j["source_weights_hash"] = b.provenance->source_weights_hash;
  }
  json rows = json::array();
  for (std::size_t i = 0; i < b.m(); ++i) {
    auto r = b.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  j["rows"] = std::move(rows);
  return j;
}

FrequencyMatrix frequency_matrix_from_json(const json& j) {
  try {
    const auto d = j.at("d").get<std::size_t>();
    std::vector<double> flat;
    for (const auto& row : j.at("rows")) {
      if (row.size() != d) throw InvalidArgument("frequency matrix row length differs from d");
      for (const auto& v : row) flat.push_back(v.get<double>());
    }
    FrequencyMatrix b(parse_family(j.at("family").get<std::string>()), d, std::move(flat));
    if (j.contains("N")) b.N = j["N"].get<int>();
    if (j.contains("sigma")) b.sigma = j["sigma"].get<double>();
    if (j.contains("seed")) b.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("source_M")) {
      b.provenance = PruneProvenance{j["source_M"].get<int>(),
                                     j.value("source_weights_hash", std::string{})};
    }
    return b;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed frequency matrix JSON: ") + e.what());
  }
}

void save_frequency_matrix(const FrequencyMatrix& b, const std::filesystem::path& path) {
  write_text(path, frequency_matrix_to_json(b).dump(1) + "\n");
}

FrequencyMatrix load_frequency_matrix(const std::filesystem::path& path) {
  return frequency_matrix_from_json(parse_json(read_bytes(path), path));
}

json network_to_json(const NetworkParams& params) {
  json j;
  j["format"] = "finr-weights";
  j["version"] = 1;
  j["input_dim"] = params.input.d;
  j["input_mode"] = input_mode_name(params.input.mode);
  j["alpha"] = params.input.alpha;
  j["mapping"] = params.input.mode == InputMode::raw ? json(nullptr)
                                                     : frequency_matrix_to_json(params.input.b);
  json layers = json::array();
  for (const auto& l : params.layers) {
    json rows = json::array();
    for (std::size_t r = 0; r < l.out; ++r) {
      rows.push_back(std::vector<double>(l.w.begin() + static_cast<std::ptrdiff_t>(r * l.in),
                                         l.w.begin() + static_cast<std::ptrdiff_t>((r + 1) * l.in)));
    }
    layers.push_back({{"w", std::move(rows)},
                      {"b", l.b},
                      {"act", activation_name(l.act)},
                      {"omega0", l.omega0}});
  }
  j["layers"] = std::move(layers);
  return j;
}

NetworkParams network_from_json(const json& j) {
  try {
    NetworkParams params;
    params.input.mode = parse_input_mode(j.at("input_mode").get<std::string>());
    params.input.d = j.at("input_dim").get<std::size_t>();
    params.input.alpha = j.value("alpha", 0.0);
    if (params.input.mode != InputMode::raw) {
      params.input.b = frequency_matrix_from_json(j.at("mapping"));
    }
    for (const auto& jl : j.at("layers")) {
      Layer l;
      l.act = parse_activation(jl.at("act").get<std::string>());
      l.omega0 = jl.value("omega0", 1.0);
      l.b = jl.at("b").get<std::vector<double>>();
      l.out = l.b.size();
      const auto& rows = jl.at("w");
      if (rows.size() != l.out) throw InvalidArgument("weight rows do not match bias length");
      l.in = l.out ? rows[0].size() : 0;
      for (const auto& row : rows) {
        if (row.size() != l.in) throw InvalidArgument("ragged weight matrix");
        for (const auto& v : row) l.w.push_back(v.get<double>());
      }
      params.layers.push_back(std::move(l));
    }
    params.validate();
    return params;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed weight JSON: ") + e.what());
  }
}

std::vector<unsigned char> network_to_binary(const NetworkParams& params) {
  Writer w;
  w.bytes.insert(w.bytes.end(), kMagic, kMagic + sizeof(kMagic));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(params.input.mode));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(params.input.d));
  w.put<double>(params.input.alpha);
  const bool mapped = params.input.mode != InputMode::raw;
  w.put<std::uint8_t>(mapped);
  if (mapped) write_mapping(w, params.input.b);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(params.layers.size()));
  for (const auto& l : params.layers) {
    w.put<std::uint32_t>(static_cast<std::uint32_t>(l.act));
    w.put<double>(l.omega0);
    w.put<std::uint64_t>(l.out);
    w.put<std::uint64_t>(l.in);
    w.put_doubles(l.w);
    w.put_doubles(l.b);
  }
  return std::move(w.bytes);
}

NetworkParams network_from_binary(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw InvalidArgument("not a binary weight file");
  }
  Reader r(bytes);
  r.skip(sizeof(kMagic));
  NetworkParams params;
  const auto mode = r.get<std::uint32_t>();
  if (mode > static_cast<std::uint32_t>(InputMode::mapped_progressive)) {
    throw InvalidArgument("unknown input mode in binary weight file");
  }
  params.input.mode = static_cast<InputMode>(mode);
  params.input.d = r.get<std::uint32_t>();
  params.input.alpha = r.get<double>();
  if (r.get<std::uint8_t>()) params.input.b = read_mapping(r);
  const auto count = r.get<std::uint32_t>();
  for (std::uint32_t i = 0; i < count; ++i) {
    Layer l;
    const auto act = r.get<std::uint32_t>();
    if (act > static_cast<std::uint32_t>(Activation::sine)) {
      throw InvalidArgument("unknown activation in binary weight file");
    }
    l.act = static_cast<Activation>(act);
    l.omega0 = r.get<double>();
    l.out = r.get<std::uint64_t>();
    l.in = r.get<std::uint64_t>();
    l.w = r.get_doubles(l.out * l.in);
    l.b = r.get_doubles(l.out);
    params.layers.push_back(std::move(l));
  }
  if (r.pos() != bytes.size()) throw InvalidArgument("trailing bytes in binary weight file");
  params.validate();
  return params;
}

void save_network(const NetworkParams& params, const std::filesystem::path& path) {
  if (path.extension() == ".bin") {
    const auto bytes = network_to_binary(params);
    write_text(path, std::string(bytes.begin(), bytes.end()));
  } else {
    write_text(path, network_to_json(params).dump(1) + "\n");
  }
}

NetworkParams load_network(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  if (bytes.size() >= sizeof(kMagic) && std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) == 0) {
    return network_from_binary(bytes);
  }
  return network_from_json(parse_json(bytes, path));
}

std::string weights_hash(const NetworkParams& params) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& l : params.layers) {
    for (double v : l.w) mix(v);
    for (double v : l.b) mix(v);
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

NetworkParams network_from_coefficients(const std::vector<SpectralCoefficients>& channels) {
  if (channels.empty()) throw InvalidArgument("network_from_coefficients: no channels");
  const FrequencyMatrix& lattice = channels.front().lattice;
  const std::size_t m = lattice.m();
  NetworkParams params;
  params.input.mode = InputMode::mapped;
  params.input.d = lattice.d();
  params.input.b = lattice;
  Layer l;
  l.in = 2 * m;
  l.out = channels.size();
  l.act = Activation::identity;
  l.b.assign(l.out, 0.0);
  for (const auto& c : channels) {
    if (!(c.lattice == lattice)) throw InvalidArgument("channels use different lattices");
    const auto ow = weights_from_coefficients(c);
    l.w.insert(l.w.end(), ow.w.begin(), ow.w.end());
  }
  params.layers.push_back(std::move(l));
  params.validate();
  return params;
}

std::vector<SpectralCoefficients> coefficients_from_network(const NetworkParams& params) {
  if (!params.is_mapped_perceptron() || params.input.b.family() != MappingFamily::integer ||
      !params.input.b.N) {
    throw InvalidArgument("coefficients_from_network: needs an integer-lattice perceptron");
  }
  const Layer& l = params.layers[0];
  const std::size_t m = params.input.b.m();
  std::vector<SpectralCoefficients> out;
  for (std::size_t o = 0; o < l.out; ++o) {
    SpectralCoefficients c;
    c.N = *params.input.b.N;
    c.lattice = params.input.b;
    const double* row = l.w.data() + o * l.in;
    c.a.assign(row, row + m);
    c.b.assign(row + m, row + 2 * m);
    // The DC term carries the bias.
    c.a[0] += l.b[o];
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace finr
