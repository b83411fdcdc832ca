# Copyright 2026 The kerrzz Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Two Kerr-cat qubits coupled through a double-transmon coupler."""

from kerrzz._core import (
    KerrzzError,
    __version__,
    analytic_gate_dephasing_infidelity,
    analytic_off_infidelity,
    delta1_ghz,
    dephasing_rate,
    derive_model2,
    off_residual,
    run,
    rzz_gate,
    selftest,
    table3_alpha_max,
    theta_of_schedule,
)

__all__ = [
    "KerrzzError",
    "__version__",
    "analytic_gate_dephasing_infidelity",
    "analytic_off_infidelity",
    "delta1_ghz",
    "dephasing_rate",
    "derive_model2",
    "off_residual",
    "run",
    "rzz_gate",
    "selftest",
    "table3_alpha_max",
    "theta_of_schedule",
]
