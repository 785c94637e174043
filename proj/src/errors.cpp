// Copyright 2026 The tpulse Authors
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

#include "tpulse/errors.hpp"

namespace tpulse {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_dimension: return "invalid-dimension";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::index_out_of_range: return "index-out-of-range";
    case ErrorCode::unphysical_dephasing: return "unphysical-dephasing";
    case ErrorCode::unsupported_filter: return "unsupported-filter";
    case ErrorCode::nyquist_violation: return "nyquist-violation";
    case ErrorCode::step_size_violation: return "step-size-violation";
    case ErrorCode::tolerance_not_reached: return "tolerance-not-reached";
    case ErrorCode::non_hermitian: return "non-hermitian";
    case ErrorCode::calibration_failed: return "calibration-failed";
    case ErrorCode::fit_failed: return "fit-failed";
    case ErrorCode::config_error: return "config-error";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

}  // namespace tpulse
