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

// Run configuration: `key = value` text with unit-suffixed keys.
//
// Frequencies are given as f = omega / 2pi in the unit named by the key
// suffix (`_mhz`, `_ghz`, `_khz`), times in `_ns`, capacitances in `_pf` /
// `_ff`. Values may repeat the unit (`t_f_ns = 16ns`); a different unit is a
// parse error. Lines starting with '#' are comments.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kerrzz/circuit.hpp"
#include "kerrzz/dynamics.hpp"
#include "kerrzz/experiments.hpp"
#include "kerrzz/model.hpp"

namespace kerrzz {

struct KeyInfo {
  std::string name;
  std::string unit;           // human-readable unit, "" when dimensionless
  std::string default_value;  // "" means no default (must be supplied when used)
  std::string help;
};

// Every accepted key, in a fixed order.
const std::vector<KeyInfo>& config_keys();

class Config {
 public:
  // Table I values and the default truncation / integrator settings.
  Config();

  static Config from_text(const std::string& text, const std::string& origin = "<string>");
  static Config from_file(const std::string& path);

  // Applies one `key=value` assignment; unknown keys and unit mismatches throw ErrorKind::config.
  void set(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  bool has_value(const std::string& key) const;
  const std::string& raw(const std::string& key) const;
  double number(const std::string& key) const;
  int integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;

  // All keys with their resolved values, sorted by key.
  const std::map<std::string, std::string>& values() const { return values_; }

  SystemParams system_params() const;
  // Truncation for pure-state runs, or the smaller one used when the density
  // matrix is integrated (kappa > 0 or force_density).
  TruncationSpec truncation(bool lossy = false) const;
  IntegratorOptions integrator() const;
  CircuitParams circuit() const;
  Tier tier() const;

 private:
  std::map<std::string, std::string> values_;
};

// Splits "16ns", "16 ns" or "16" into the number and the trailing unit text.
std::pair<double, std::string> parse_quantity(const std::string& text);

// --- CSV output ----------------------------------------------------------

struct CsvTable {
  std::vector<std::string> metadata;  // written as "# line"
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// Full-precision output ("%.17g"), so identical inputs give identical files.
void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

// Column names end in a unit suffix (_ns, _mhz, _ghz, _khz, _rad, _s) or are
// known dimensionless quantities.
struct CsvSchema {
  std::string name;
  std::vector<std::string> required_columns;
  std::vector<std::string> dimensionless;  // extra unitless names for this file kind
};

const std::vector<CsvSchema>& csv_schemas();

// Checks header units, required columns and row shape; returns the problems found.
std::vector<std::string> validate_csv(const std::string& path, const CsvSchema& schema);

}  // namespace kerrzz
