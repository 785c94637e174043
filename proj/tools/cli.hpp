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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tpulse::cli {

/// Runs the command line `args` (without the program name). Exit codes:
/// 0 success, 1 other failure, 2 configuration or usage error,
/// 3 calibration failure, 4 fit failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Environment variable overriding [output] directory; --output wins over it.
inline constexpr const char* kOutputEnv = "TPULSE_OUTPUT_DIR";

}  // namespace tpulse::cli
