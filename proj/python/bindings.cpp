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

// Python module kerrzz._core.

#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kerrzz/analysis.hpp"
#include "kerrzz/circuit.hpp"
#include "kerrzz/cli.hpp"
#include "kerrzz/config.hpp"
#include "kerrzz/experiments.hpp"
#include "kerrzz/schedule.hpp"
#include "kerrzz/selftest.hpp"
#include "kerrzz/units.hpp"

namespace py = pybind11;
using namespace kerrzz;

namespace {

Config config_from(const std::map<std::string, std::string>& settings) {
  Config c;
  for (const auto& [k, v] : settings) c.set(k, v);
  return c;
}

py::dict stats_dict(const IntegratorStats& s) {
  py::dict d;
  d["steps"] = s.steps;
  d["rejected"] = s.rejected;
  d["rhs_evaluations"] = s.rhs_evaluations;
  d["max_trace_error"] = s.max_trace_error;
  d["wall_seconds"] = s.wall_seconds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Kerr-cat R_zz gate and residual-coupling simulations";
  m.attr("__version__") = kVersion;

  py::register_exception<Error>(m, "KerrzzError", PyExc_RuntimeError);

  m.def("theta_of_schedule",
        [](double t_f_ns, double alpha_max) { return theta_of_schedule(table1_schedule(units::ns(t_f_ns), alpha_max)); },
        py::arg("t_f_ns"), py::arg("alpha_max"), "Gate angle (rad) of the table I schedule.");

  m.def("delta1_ghz",
        [](double t_ns, double t_f_ns, double alpha_max) {
          return units::to_ghz(delta1_of_t(units::ns(t_ns), table1_schedule(units::ns(t_f_ns), alpha_max)));
        },
        py::arg("t_ns"), py::arg("t_f_ns"), py::arg("alpha_max"), "Delta_1/2pi in GHz at time t.");

  m.def("dephasing_rate", &dephasing_rate, py::arg("kappa"), py::arg("alpha"));
  m.def("analytic_off_infidelity", &analytic_off_infidelity, py::arg("t"), py::arg("alpha"), py::arg("gamma"));
  m.def("analytic_gate_dephasing_infidelity", &analytic_gate_dephasing_infidelity, py::arg("t_f"),
        py::arg("theta"), py::arg("alpha"), py::arg("gamma"));
  m.def("table3_alpha_max", &table3_alpha_max, py::arg("t_f_ns"));

  m.def("rzz_gate",
        [](const std::map<std::string, std::string>& settings) {
          const Config c = config_from(settings);
          const SystemParams p = c.system_params();
          const double t_f = units::ns(c.number("t_f_ns"));
          const double amax = c.has_value("alpha_c_max") ? c.number("alpha_c_max") : table3_alpha_max(c.number("t_f_ns"));
          if (!(amax > 0.0)) throw Error(ErrorKind::config, "missing key 'alpha_c_max'");
          const bool density = p.kappa > 0.0 || c.flag("force_density");
          const GateResult g = run_rzz_gate(p, c.truncation(density), t_f, amax,
                                            c.number("theta_over_pi") * std::numbers::pi, c.integrator(),
                                            c.flag("force_density"));
          py::dict d;
          d["t_f_ns"] = units::to_ns(g.t_f);
          d["alpha_max"] = g.alpha_max;
          d["theta_schedule"] = g.theta_schedule;
          d["infidelity"] = g.infidelity;
          d["analytic_dephasing"] = g.analytic_dephasing;
          d["stats"] = stats_dict(g.stats);
          return d;
        },
        py::arg("settings") = std::map<std::string, std::string>{},
        "R_zz gate run; settings use the config keys (e.g. {'t_f_ns': '16'}).");

  m.def("off_residual",
        [](const std::map<std::string, std::string>& settings) {
          const Config c = config_from(settings);
          const SystemParams p = c.system_params();
          const bool density = p.kappa > 0.0 || c.flag("force_density");
          const auto grid = uniform_grid(0.0, units::ns(c.number("t_end_ns")), units::ns(c.number("dt_ns")));
          const OffResidualResult r =
              run_off_residual(p, c.truncation(density), grid, c.integrator(), c.flag("force_density"));
          py::dict d;
          std::vector<double> t_ns;
          for (double t : r.t) t_ns.push_back(units::to_ns(t));
          d["t_ns"] = t_ns;
          d["infidelity"] = r.infidelity;
          d["analytic"] = r.analytic;
          d["max_infidelity"] = r.max_infidelity;
          d["slope_pass"] = r.slope.pass;
          d["stats"] = stats_dict(r.stats);
          return d;
        },
        py::arg("settings") = std::map<std::string, std::string>{});

  m.def("derive_model2",
        []() {
          const DerivedParamsII d = derive_model2(CircuitParams::model2_design());
          py::dict out;
          out["E_C_over_h_mhz"] = d.E_C / units::kPlanck * 1e-6;
          out["x"] = d.x;
          out["y"] = d.y;
          out["z"] = d.z;
          out["w"] = d.w;
          out["K_over_2pi_mhz"] = units::to_mhz(d.kerr);
          out["p_over_2pi_mhz"] = units::to_mhz(d.pump);
          out["alpha"] = d.alpha;
          out["g1_over_2pi_mhz"] = units::to_mhz(d.g[0]);
          out["g2_over_2pi_mhz"] = units::to_mhz(d.g[1]);
          out["delta1_over_2pi_ghz"] = units::to_ghz(d.detuning[0]);
          out["delta2_over_2pi_ghz"] = units::to_ghz(d.detuning[1]);
          return out;
        },
        "Derived parameters for the model II design values.");

  m.def("selftest", []() {
    std::vector<std::tuple<std::string, bool, std::string>> out;
    for (const auto& r : run_selftest()) out.emplace_back(r.name, r.pass, r.detail);
    return out;
  });

  m.def("run",
        [](const std::string& subcommand, const std::map<std::string, std::string>& settings,
           const std::string& out_dir) {
          RunRequest req;
          req.subcommand = subcommand;
          req.config = config_from(settings);
          req.config_source = "<python>";
          req.out_dir = out_dir;
          std::ostringstream log;
          const int code = dispatch(req, log);
          return std::make_pair(code, log.str());
        },
        py::arg("subcommand"), py::arg("settings") = std::map<std::string, std::string>{},
        py::arg("out_dir") = ".", "Runs a command-line subcommand; returns (exit code, log).");
}
