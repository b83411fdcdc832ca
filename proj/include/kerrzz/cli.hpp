// Copyright 2026 The kerrzz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Subcommand dispatch shared by the command-line tool and the tests.

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "kerrzz/config.hpp"

namespace kerrzz {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { exit_ok = 0, exit_domain_error = 1, exit_usage_error = 2 };

struct RunRequest {
  std::string subcommand;  // off-residual, rzz-gate, optimize-alpha, circuit-derive, schedule-preview, selftest
  Config config;
  std::string config_source;  // path or "<defaults>"
  std::string out_dir = ".";
};

const std::vector<std::string>& subcommands();

// Loads a key=value file, or the "config" block of a run manifest (*.json).
// A manifest also yields its subcommand through `subcommand` when non-null.
Config load_config(const std::string& path, std::string* subcommand = nullptr);

// Runs the subcommand, writes CSV files and `<subcommand>.manifest.json` into
// out_dir, and returns the exit code. Progress and errors go to `log`.
int dispatch(const RunRequest& request, std::ostream& log);

}  // namespace kerrzz
