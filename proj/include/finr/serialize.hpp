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

// File formats.
//
// Frequency matrix (JSON):
//   {"family": "integer"|"gaussian"|"positional"|"pruned", "d": 2, "N": 8,
//    "sigma": 10.0, "seed": 7, "source_M": 128, "source_weights_hash": "...",
//    "rows": [[0, 0], [0, 1], ...]}
// Optional keys appear only when set. Rows are stored in matrix order.
//
// Network weights (JSON):
//   {"format": "finr-weights", "version": 1, "input_dim": 2,
//    "input_mode": "raw"|"mapped"|"mapped_progressive", "alpha": 0.0,
//    "mapping": <frequency matrix or null>,
//    "layers": [{"w": [[...], ...], "b": [...], "act": "identity"|"relu"|"sine",
//                "omega0": 30.0}, ...]}
//
// Network weights (binary, little-endian): the 8-byte magic "FINRWB01", then
//   u32 input_mode, u32 input_dim, f64 alpha, u8 has_mapping,
//   [mapping: u32 family, u32 d, u64 m, u8 has_N, i32 N, u8 has_sigma, f64 sigma,
//    u8 has_seed, u64 seed, u8 has_provenance, i32 source_M, u32 hash_len,
//    hash bytes, m*d f64 rows]
//   u32 layer_count, per layer: u32 act, f64 omega0, u64 out, u64 in,
//   out*in f64 weights, out f64 biases.
//
// Doubles round-trip bit-exactly through both formats.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "finr/lattice.hpp"
#include "finr/network.hpp"
#include "finr/spectral.hpp"

namespace finr {

nlohmann::json frequency_matrix_to_json(const FrequencyMatrix& b);
FrequencyMatrix frequency_matrix_from_json(const nlohmann::json& j);
void save_frequency_matrix(const FrequencyMatrix& b, const std::filesystem::path& path);
FrequencyMatrix load_frequency_matrix(const std::filesystem::path& path);

nlohmann::json network_to_json(const NetworkParams& params);
NetworkParams network_from_json(const nlohmann::json& j);

std::vector<unsigned char> network_to_binary(const NetworkParams& params);
NetworkParams network_from_binary(const std::vector<unsigned char>& bytes);

// Picks the binary format for a ".bin" extension and JSON otherwise.
void save_network(const NetworkParams& params, const std::filesystem::path& path);
// Detects the format from the file's leading bytes.
NetworkParams load_network(const std::filesystem::path& path);

// FNV-1a 64 over every weight and bias, as 16 hex digits.
std::string weights_hash(const NetworkParams& params);

// One mapped perceptron output per channel, weights (a, b), zero bias.
NetworkParams network_from_coefficients(const std::vector<SpectralCoefficients>& channels);

// Inverse of network_from_coefficients for perceptrons over a d=2 integer
// lattice; grid shape is unknown and left as 0.
std::vector<SpectralCoefficients> coefficients_from_network(const NetworkParams& params);

}  // namespace finr
