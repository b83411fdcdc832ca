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

#include "kerrzz/error.hpp"

namespace kerrzz {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_dimension: return "invalid dimension";
    case ErrorKind::dimension_mismatch: return "dimension mismatch";
    case ErrorKind::basis_mismatch: return "basis mismatch";
    case ErrorKind::basis_quality: return "basis quality";
    case ErrorKind::truncation: return "truncation";
    case ErrorKind::singular_detuning: return "singular detuning";
    case ErrorKind::singular_condition: return "singular condition";
    case ErrorKind::invalid_bias: return "invalid bias";
    case ErrorKind::out_of_range: return "out of range";
    case ErrorKind::no_convergence: return "no convergence";
    case ErrorKind::infeasible_schedule: return "infeasible schedule";
    case ErrorKind::step_underflow: return "step-size underflow";
    case ErrorKind::trace_drift: return "trace drift";
    case ErrorKind::invalid_argument: return "invalid argument";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace kerrzz
