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

#include <iosfwd>
#include <string>
#include <vector>

#include "finr/cli_config.hpp"

namespace finr::cli {

// Exit codes: 0 success, 1 runtime failure (or a failed check), 2 usage or
// configuration error with nothing written.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

int cmd_fit(const ExperimentConfig& config, std::ostream& log);
int cmd_init_check(const ExperimentConfig& config, std::ostream& log);
int cmd_prune(const ExperimentConfig& config, std::ostream& log);
int cmd_compare(const ExperimentConfig& config, std::ostream& log);
int cmd_render(const ExperimentConfig& config, std::ostream& log);

// Parses argv (subcommands fit, init-check, prune, compare, render) and runs
// the command. Module errors are reported on `err` and mapped to exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace finr::cli
