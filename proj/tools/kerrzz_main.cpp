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

// kerrzz command-line tool.
//
//   kerrzz <subcommand> [--config FILE] [--out DIR] [--tier ci|full] [--set key=value]...
//
// Exit codes: 0 ok, 1 domain error, 2 usage error.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kerrzz/cli.hpp"
#include "kerrzz/error.hpp"

namespace {

struct Common {
  std::string config;
  std::string out = ".";
  std::string tier;
  std::vector<std::string> sets;
  std::string tf;
  std::string alpha_max;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "key=value config file or a run manifest (.json)");
  sub->add_option("--out", c.out, "output directory")->capture_default_str();
  sub->add_option("--tier", c.tier, "ci or full")->check(CLI::IsMember({"ci", "full"}));
  sub->add_option("--set", c.sets, "override one key (key=value), repeatable")->allow_extra_args(false);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two Kerr-cat qubits with a double-transmon coupler: residual ZZ and R_zz gate runs"};
  app.set_version_flag("--version", kerrzz::kVersion);
  app.require_subcommand(1);

  Common c;
  std::vector<CLI::App*> subs;
  const std::vector<std::pair<std::string, std::string>> help = {
      {"off-residual", "infidelity with the coupling switched off"},
      {"rzz-gate", "R_zz gate infidelity for one gate time"},
      {"optimize-alpha", "alpha_max sweep over gate times"},
      {"circuit-derive", "Hamiltonian parameters from circuit values"},
      {"schedule-preview", "coupler-1 detuning schedule"},
      {"selftest", "fast invariant checks"},
  };
  for (const auto& [name, text] : help) {
    CLI::App* sub = app.add_subcommand(name, text);
    add_common(sub, c);
    if (name == "schedule-preview" || name == "rzz-gate") {
      sub->add_option("--tf", c.tf, "gate time, e.g. 16ns");
      sub->add_option("--alpha-max", c.alpha_max, "peak coupler displacement");
    }
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kerrzz::exit_ok : kerrzz::exit_usage_error;
  }

  kerrzz::RunRequest req;
  for (CLI::App* sub : subs) {
    if (sub->parsed()) req.subcommand = sub->get_name();
  }
  req.out_dir = c.out;
  try {
    if (!c.config.empty()) {
      req.config = kerrzz::load_config(c.config);
      req.config_source = c.config;
    } else {
      req.config_source = "<defaults>";
    }
    if (!c.tier.empty()) req.config.set("tier", c.tier);
    if (!c.tf.empty()) req.config.set("t_f_ns", c.tf);
    if (!c.alpha_max.empty()) req.config.set("alpha_c_max", c.alpha_max);
    for (const auto& s : c.sets) req.config.set(s);
  } catch (const kerrzz::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kerrzz::exit_usage_error;
  }
  return kerrzz::dispatch(req, std::cerr);
}
