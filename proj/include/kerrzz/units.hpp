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

#pragma once

#include <numbers>

namespace kerrzz::units {

// CODATA 2018 (exact SI values).
inline constexpr double kPlanck = 6.62607015e-34;           // J s
inline constexpr double kHbar = kPlanck / (2.0 * std::numbers::pi);
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Every Hamiltonian coefficient is an angular frequency in rad/s.
constexpr double mhz(double f_over_2pi) { return kTwoPi * f_over_2pi * 1e6; }
constexpr double ghz(double f_over_2pi) { return kTwoPi * f_over_2pi * 1e9; }
constexpr double khz(double f_over_2pi) { return kTwoPi * f_over_2pi * 1e3; }
constexpr double to_mhz(double omega) { return omega / kTwoPi * 1e-6; }
constexpr double to_ghz(double omega) { return omega / kTwoPi * 1e-9; }
constexpr double to_khz(double omega) { return omega / kTwoPi * 1e-3; }

constexpr double ns(double t) { return t * 1e-9; }
constexpr double to_ns(double t) { return t * 1e9; }

// Energies quoted as E/h in the given frequency unit.
constexpr double energy_ghz(double e_over_h) { return e_over_h * 1e9 * kPlanck; }
constexpr double energy_to_ghz(double e) { return e / kPlanck * 1e-9; }

}  // namespace kerrzz::units
